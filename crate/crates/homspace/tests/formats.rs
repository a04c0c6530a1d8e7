use std::path::Path;

use homspace::output::fmt_f64;
use homspace::Definition;
use proptest::prelude::*;

proptest! {
    #[test]
    fn csv_floats_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(fmt_f64(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
    }

    #[test]
    fn one_sided_constants_are_mirrored(c in prop::collection::vec(-3.0f64..3.0, 3)) {
        // Upper-triangle entries of an arbitrary 3-dimensional bracket table.
        let mut entries = Vec::new();
        for (k, v) in c.iter().enumerate() {
            entries.push(format!("[{k}, 0, 1, {v:?}]"));
            entries.push(format!("[{k}, 1, 2, {v:?}]"));
        }
        let text = format!("[algebra]\ndim = 3\nstructure_constants = [{}]\n", entries.join(", "));
        let def = Definition::parse(&text, Path::new("p.toml")).unwrap();
        let space = def.build(false).unwrap();
        if let Some(alg) = &space.algebra {
            for k in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        prop_assert_eq!(alg.constant(k, i, j), -alg.constant(k, j, i));
                    }
                }
            }
        } else {
            // Only Jacobi can reject an antisymmetric table.
            prop_assert!(space.failures.iter().any(|f| f.check == "algebra"));
        }
    }
}
