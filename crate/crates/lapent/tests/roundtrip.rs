//! Emit → parse is the identity on exact matrices.

use lapent::matrix_file::{emit_decimal, emit_exact, parse, parse_entry};
use lapent_core::corpus::{build_exact, entry, StateName};
use lapent_core::exact::ratio;
use lapent_core::{BipartiteDims, Exact, ExactMatrix, Surd};
use proptest::prelude::*;

fn surd() -> impl Strategy<Value = Surd> {
    (-50i64..=50, 1i64..=40, prop::sample::select(vec![1u64, 2, 3, 5, 7, 12])).prop_map(|(p, q, k)| Surd::new(ratio(p, q), k))
}

fn exact() -> impl Strategy<Value = Exact> {
    (surd(), prop::option::of(surd())).prop_map(|(re, im)| Exact::new(re, im.unwrap_or_else(Surd::zero)))
}

#[test]
fn every_reference_state_round_trips() {
    for name in StateName::ALL {
        let param = entry(name).parameter.map(|d| d.hi);
        let (m, dims) = build_exact(name, param.as_ref()).unwrap();
        let parsed = parse(&emit_exact(&m, dims)).unwrap();
        assert_eq!(parsed.matrix, m, "{}", name.as_str());
        assert_eq!(parsed.dims, dims);
    }
}

proptest! {
    #[test]
    fn single_entries_round_trip(z in exact()) {
        prop_assert_eq!(parse_entry(&z.to_string()), Some(z));
    }

    #[test]
    fn matrices_round_trip(entries in prop::collection::vec(exact(), 16)) {
        let m = ExactMatrix::from_fn(4, |i, j| entries[i * 4 + j].clone());
        let dims = BipartiteDims::new(2, 2).unwrap();
        let parsed = parse(&emit_exact(&m, dims)).unwrap();
        prop_assert_eq!(parsed.matrix, m);
    }

    #[test]
    fn decimal_emission_is_within_twelve_digits(entries in prop::collection::vec(exact(), 16)) {
        let m = ExactMatrix::from_fn(4, |i, j| entries[i * 4 + j].clone()).to_matrix();
        let text = emit_decimal(&m, BipartiteDims::new(2, 2).unwrap());
        let body: Vec<&str> = text.lines().skip(1).collect();
        prop_assert_eq!(body.len(), 4);
        for (i, line) in body.iter().enumerate() {
            for (j, tok) in line.split_whitespace().enumerate() {
                let back = parse_entry(tok).unwrap().to_complex();
                let want = m.get(i, j);
                prop_assert!((back - want).norm() <= 1e-11 * want.norm());
            }
        }
    }
}
