//! Property tests for the serialization round trips and the solver's
//! agreement with brute force on small random formulas.

use proptest::prelude::*;

use graham_cube::bounds::{parse_expr, TowerExpr};
use graham_cube::cube::{Direction, Vertex};
use graham_cube::encode::{
    build_cnf, decode_witness, emit_dimacs, encode_witness, parse_dimacs, CnfFormula,
};
use graham_cube::params::{phi, phi_inv};
use graham_cube::solver::{solve, SolverConfig, Status};

#[test]
fn dimacs_round_trip() {
    for n in 2..=5 {
        let f = build_cnf(n).unwrap();
        let parsed = parse_dimacs(&emit_dimacs(&f, &["round trip"])).unwrap();
        assert_eq!(parsed.var_count, f.var_count);
        assert_eq!(parsed.clauses, f.clauses);
    }
}

proptest! {
    #[test]
    fn witness_round_trip(n in 2usize..=4, seed_bits in proptest::collection::vec(any::<bool>(), 40)) {
        let vars = (3usize.pow(n as u32) - 1) / 2;
        let model: Vec<bool> = (0..vars).map(|i| seed_bits[i % seed_bits.len()] ^ (i % 3 == 0)).collect();
        let coloring = decode_witness(&model, n).unwrap();
        prop_assert_eq!(encode_witness(&coloring).unwrap(), model);
    }

    #[test]
    fn vertex_display_parse_round_trip(n in 1usize..=12, bits in any::<u64>()) {
        let v = Vertex::new(n, bits & ((1 << n) - 1)).unwrap();
        prop_assert_eq!(Vertex::parse(&v.to_string()).unwrap(), v);
    }

    #[test]
    fn direction_canonicalization_identifies_negation(raw in proptest::collection::vec(-1i8..=1, 1..=8)) {
        prop_assume!(raw.iter().any(|&c| c != 0));
        let neg: Vec<i8> = raw.iter().map(|&c| -c).collect();
        let d1 = Direction::canonical(&raw).unwrap();
        let d2 = Direction::canonical(&neg).unwrap();
        prop_assert_eq!(&d1, &d2);
        prop_assert_eq!(Direction::parse(&d1.to_string()).unwrap(), d1);
    }

    #[test]
    fn phi_inverts(x in prop_oneof![Just(-1i8), Just(1i8)], y in prop_oneof![Just(-1i8), Just(1i8)]) {
        prop_assert_eq!(phi_inv(phi(x, y)), (x, y));
    }

    #[test]
    fn tower_expr_display_parse_round_trip(height in 1u64..=30, depth in 0usize..=2) {
        let mut e = TowerExpr::tower(2, height);
        for _ in 0..depth {
            e = TowerExpr::tet(2, e);
        }
        prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn solver_agrees_with_brute_force(
        var_count in 1usize..=10,
        raw_clauses in proptest::collection::vec(
            proptest::collection::vec((0usize..10, any::<bool>()), 1..=4),
            1..=30
        ),
        seed in any::<u64>(),
    ) {
        let clauses: Vec<Vec<i32>> = raw_clauses
            .iter()
            .map(|cl| {
                cl.iter()
                    .map(|&(v, sign)| {
                        let var = (v % var_count) as i32 + 1;
                        if sign { var } else { -var }
                    })
                    .collect()
            })
            .collect();
        let f = CnfFormula { var_count, clauses: clauses.clone() };

        let brute_sat = (0u32..1 << var_count).any(|m| {
            let model: Vec<bool> = (0..var_count).map(|i| m >> i & 1 == 1).collect();
            f.satisfied_by(&model)
        });

        let config = SolverConfig { seed, ..SolverConfig::default() };
        let res = solve(&f, &config).unwrap();
        prop_assert_eq!(res.status == Status::Sat, brute_sat);
        if let Some(model) = res.model {
            prop_assert!(f.satisfied_by(&model));
        }
    }
}
