use g2re_core::aq_g2::{solve_block_global, solve_intertwiner, IntertwinerTable, SolveOptions};
use g2re_core::geometry::positive_roots;
use g2re_core::lj::UParams;
use g2re_core::reduction::{build_g, build_r, Kind, SpectralMatrix};
use g2re_core::verify::G2_ARGUMENTS;

#[test]
fn intertwiner_table_json_round_trip() {
    let t = solve_intertwiner(1, 3, &SolveOptions::default()).unwrap();
    let text = serde_json::to_string(&t.to_json()).unwrap();
    let back = IntertwinerTable::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back, t);
}

#[test]
fn spectral_matrix_json_round_trip() {
    for kind in [Kind::Trace, Kind::Boundary] {
        for m in [build_r(kind, 2), build_g(kind, 1, &UParams::generic()), build_g(kind, 1, &UParams::default_specialized())] {
            let back = SpectralMatrix::from_json(&m.to_json()).unwrap();
            assert_eq!(back, m, "{}", m.label(0));
        }
    }
}

#[test]
fn blocks_are_uniquely_determined() {
    let t = solve_intertwiner(2, 4, &SolveOptions::default()).unwrap();
    for w in t.blocks.keys().copied().filter(|w| w.p >= 1 && w.q >= 2).take(6) {
        let c = solve_block_global(&t, w, 5).expect("block re-solved");
        assert!(c.consistent && c.matches_table, "{c:?}");
        assert_eq!(c.rank, c.unknowns, "block {w:?} not unique");
    }
}

#[test]
fn spectral_arguments_follow_the_positive_roots() {
    let roots: Vec<(i32, i32)> = positive_roots().iter().map(|r| (r.c1 as i32, r.c2 as i32)).collect();
    assert_eq!(roots, G2_ARGUMENTS.to_vec());
}
