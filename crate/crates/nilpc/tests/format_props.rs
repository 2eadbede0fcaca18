use nilpc::format::{emit_presentation, parse_unchecked};
use nilpc_core::{Period, Presentation, PresentationBuilder};
use proptest::prelude::*;

fn presentation() -> impl Strategy<Value = Presentation> {
    (2usize..=5)
        .prop_flat_map(|m| {
            (
                prop::collection::vec(prop::sample::select(vec![0i64, 0, 2, 3, 5]), m),
                prop::collection::vec(prop::collection::vec(-1_000_000_000_000i64..=1_000_000_000_000, m), m * m),
            )
        })
        .prop_filter_map("builder rejected", |(codes, exps)| {
            let m = codes.len();
            let periods: Vec<Period> = codes.iter().map(|&c| if c == 0 { Period::Infinite } else { Period::finite(c) }).collect();
            let mut b = PresentationBuilder::new(periods);
            let tail = |row: &[i64], from: usize| -> Vec<(usize, i64)> {
                (from..m).filter(|k| row[*k] % 3 == 0).map(|k| (k, row[k] / 3)).filter(|(_, a)| *a != 0).collect()
            };
            // row (j, i) of `exps` feeds the relation on u_j, u_i; the diagonal feeds powers
            for i in 0..m {
                if codes[i] != 0 {
                    b = b.power_i64(i, &tail(&exps[i * m + i], i + 1));
                }
                for j in i + 1..m {
                    b = b.comm_i64(j, i, &tail(&exps[j * m + i], j + 1));
                }
            }
            b.build().ok()
        })
}

proptest! {
    #[test]
    fn emit_then_parse(p in presentation(), name in "[A-Za-z][A-Za-z0-9_-]{0,8}") {
        let text = emit_presentation(&name, &p);
        let (n, q) = parse_unchecked(&text).unwrap();
        prop_assert_eq!(&n, &name);
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(emit_presentation(&n, &q), text);
    }
}
