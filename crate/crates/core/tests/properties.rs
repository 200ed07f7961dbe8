use gll::functions::{self, Expr, GraphFunction, Table};
use gll::graph::{Graph, VertexId};
use gll::lipschitz::{self, shell_profiles_via, ProfilePath};
use gll::mult_op;
use num_complex::Complex64;
use proptest::prelude::*;

fn expr_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("d".to_string()),
        Just("pi".to_string()),
        Just("i".to_string()),
        (0u32..50).prop_map(|n| n.to_string()),
        (1u32..400).prop_map(|n| format!("{}.{}", n / 100, n % 100)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) * ({b})")),
            inner.clone().prop_map(|a| format!("-({a})")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            (inner.clone(), 0i32..4).prop_map(|(a, k)| format!("({a})^{k}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("if d <= 3 then {a} else {b}")),
            inner.prop_map(|a| format!("sum({a}, k, 1, 3)")),
        ]
    })
}

fn ladder() -> Graph {
    Graph::parse("ladder").unwrap()
}

/// Random table on `B_4` of the ladder, from (index, re, im) triples.
fn table(g: &Graph, entries: &[(usize, f64, f64)]) -> Table {
    let pool = g.bfs_layers(4).unwrap();
    let mut t = Table::new();
    for &(i, re, im) in entries {
        let v = pool[i % pool.len()].0;
        t.insert(v, t.get(&v) + Complex64::new(re, im));
    }
    t
}

fn entries() -> impl Strategy<Value = Vec<(usize, f64, f64)>> {
    prop::collection::vec((0usize..64, -2.0f64..2.0, -2.0f64..2.0), 0..10)
}

fn norm(f: &GraphFunction, g: &Graph) -> f64 {
    let e = lipschitz::norm(f, g, 6).unwrap();
    assert!(e.is_exact());
    e.value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printed_expressions_reparse(src in expr_text()) {
        let e = Expr::parse(&src).unwrap();
        let printed = e.to_string();
        let again = Expr::parse(&printed).unwrap();
        prop_assert_eq!(&again, &e);
        prop_assert_eq!(again.to_string(), printed);
    }

    #[test]
    fn norm_is_a_norm(a in entries(), b in entries(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let g = ladder();
        let (ta, tb) = (table(&g, &a), table(&g, &b));
        let mut sum = ta.clone();
        for (v, z) in tb.iter() {
            sum.insert(*v, sum.get(v) + z);
        }
        let fa = functions::from_table(ta.clone());
        let fb = functions::from_table(tb);
        let c = Complex64::new(re, im);
        let na = norm(&fa, &g);
        prop_assert!(norm(&functions::from_table(sum), &g) <= na + norm(&fb, &g) + 1e-12);
        let scaled = norm(&functions::from_table(ta.map_values(|z| c * z)), &g);
        prop_assert!((scaled - c.norm() * na).abs() <= 1e-12 * (1.0 + scaled));
        prop_assert_eq!(na == 0.0, ta.is_empty());
    }

    #[test]
    fn rebase_bracket_holds(a in entries(), pick in 0usize..64) {
        let g = ladder();
        let f = functions::from_table(table(&g, &a));
        let pool = g.bfs_layers(4).unwrap();
        let (b, n) = pool[pick % pool.len()];
        let na = norm(&f, &g);
        let nb = lipschitz::norm_rebased(&f, &g, &b, 6).unwrap().value;
        let k = (n + 1) as f64;
        prop_assert!(nb <= k * na + 1e-12 && na <= k * nb + 1e-12);
    }

    #[test]
    fn kn_is_bounded_by_three(a in entries(), n in 1u64..6) {
        let g = ladder();
        let f = functions::from_table(table(&g, &a));
        let k = mult_op::apply_kn(n, &f, 2 * n + 1).unwrap();
        let nk = lipschitz::norm(&k, &g, 2 * n + 1).unwrap().value;
        prop_assert!(nk <= 3.0 * norm(&f, &g) + 1e-12);
    }

    #[test]
    fn radial_path_matches_dense(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0) {
        let f = functions::parse_expression(&format!("({a})*d^2 + ({b})*sin(d) + ({c})/(d+1) + i*d")).unwrap();
        for (fam, r) in [("tree:3", 5u64), ("lattice:2", 6), ("ladder", 8), ("random:3:4", 6)] {
            let g = Graph::parse(fam).unwrap();
            let fast = shell_profiles_via(&f, &g, r, ProfilePath::Radial).unwrap();
            let slow = shell_profiles_via(&f, &g, r, ProfilePath::Dense).unwrap();
            let close = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(p, q)| (p - q).abs() <= 1e-9 * (1.0 + p.abs()));
            prop_assert!(close(&fast.abs_max, &slow.abs_max), "{}", fam);
            prop_assert!(close(&fast.edge_diff, &slow.edge_diff), "{}", fam);
            prop_assert!(close(&fast.weighted, &slow.weighted), "{}", fam);
            prop_assert!(close(&fast.vertex_diff, &slow.vertex_diff), "{}", fam);
        }
    }
}

#[test]
fn vertex_encodings_round_trip() {
    for fam in ["ray", "tree:3", "lattice:2", "ladder", "random:5:3"] {
        let g = Graph::parse(fam).unwrap();
        for (v, _) in g.bfs_layers(4).unwrap() {
            let s = g.format_vertex(&v);
            let back: VertexId = g.parse_vertex(&s).unwrap();
            assert_eq!(back, v, "{fam} {s}");
        }
    }
}
