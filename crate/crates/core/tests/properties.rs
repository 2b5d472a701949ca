use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shortcover::board::{is_cover, BoardCover, BoardPoint, BoardVariant};
use shortcover::lifting::{extract, lift_points, normalize_cover_traced, PsiMap};
use shortcover::projective::{Automorphism, Plane, PointClass, ProjPoint};
use shortcover::setcover::{
    build_board_instance, build_windrose_instance, solve_exact, solve_greedy, Label, SolveOptions,
};

fn opts(symmetry: bool, threads: usize) -> SolveOptions {
    SolveOptions {
        symmetry,
        time_limit: None,
        threads: Some(threads),
    }
}

#[test]
fn symmetry_reduction_preserves_optima() {
    for n in 1..=10 {
        for variant in [BoardVariant::Full, BoardVariant::Punctured] {
            let inst = build_board_instance(n, variant).unwrap();
            let on = solve_exact(&inst, &opts(true, 1));
            let off = solve_exact(&inst, &opts(false, 1));
            assert_eq!(on.optimum, off.optimum, "n={n} {variant:?}");
        }
    }
}

#[test]
fn selection_is_independent_of_thread_count() {
    for (n, variant) in [
        (9, BoardVariant::Punctured),
        (10, BoardVariant::Full),
        (9, BoardVariant::Full),
    ] {
        let inst = build_board_instance(n, variant).unwrap();
        let key = |r: shortcover::SolveResult| (r.status, r.optimum, r.chosen);
        let base = key(solve_exact(&inst, &opts(true, 1)));
        for threads in [2, 4, 7] {
            assert_eq!(
                key(solve_exact(&inst, &opts(true, threads))),
                base,
                "n={n} threads={threads}"
            );
        }
    }
}

#[test]
fn greedy_never_beats_exact() {
    for n in 2..=9 {
        for variant in [BoardVariant::Full, BoardVariant::Punctured] {
            let inst = build_board_instance(n, variant).unwrap();
            let g = solve_greedy(&inst);
            assert!(inst.covers(&g.chosen_indices));
            assert!(g.optimum >= solve_exact(&inst, &SolveOptions::default()).optimum);
        }
    }
}

#[test]
fn c_equals_xi_d_plus_two() {
    for q in [5u32, 7, 8, 9] {
        let c = solve_exact(
            &build_windrose_instance(q).unwrap(),
            &SolveOptions::default(),
        )
        .optimum;
        let d = solve_exact(
            &build_board_instance(q - 1, BoardVariant::Punctured).unwrap(),
            &SolveOptions::default(),
        )
        .optimum;
        assert_eq!(c, d + 2, "q={q}");
    }
}

fn plane_for(q: u32) -> &'static Plane {
    use std::sync::OnceLock;
    static PLANES: OnceLock<Vec<Plane>> = OnceLock::new();
    let planes = PLANES.get_or_init(|| [5, 7, 8, 9].map(|q| Plane::new(q).unwrap()).to_vec());
    planes.iter().find(|p| p.q() == q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lift_is_a_cover_exactly_when_the_board_cover_is(
        q in prop::sample::select(vec![5u32, 7, 8, 9]),
        bits in prop::collection::vec(any::<bool>(), 64),
    ) {
        let pl = plane_for(q);
        let n = q - 1;
        let centers: Vec<BoardPoint> = BoardVariant::Full
            .cells(n)
            .into_iter()
            .zip(bits.iter().cycle())
            .filter(|(_, &b)| b)
            .map(|(p, _)| p)
            .take(n as usize / 2 + 1)
            .collect();
        let board = BoardCover::new(n, BoardVariant::Punctured, centers).unwrap();
        let psi = PsiMap::new(pl).unwrap();
        let pts = lift_points(&psi, &board).unwrap();
        prop_assert_eq!(is_cover(&board).covered, pl.wind_rose_report(&pts).covered);
    }
}

fn random_automorphism(pl: &Plane, rng: &mut ChaCha8Rng) -> Automorphism {
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let scale = [0; 3].map(|_| pl.field().from_index(rng.gen_range(1..pl.q())).unwrap());
    Automorphism::new(perms[rng.gen_range(0..6)], scale).unwrap()
}

#[test]
fn normalization_of_padded_covers() {
    // Optimal covers moved by random automorphisms and padded with random
    // points up to q - 2 members still normalize and extract.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in [7u32, 8, 9] {
        let pl = plane_for(q);
        let r = solve_exact(
            &build_windrose_instance(q).unwrap(),
            &SolveOptions::default(),
        );
        let base: Vec<ProjPoint> = r
            .chosen
            .iter()
            .map(|l| match l {
                Label::Point(c) => pl
                    .point(c.map(|i| pl.field().from_index(i).unwrap()))
                    .unwrap(),
                _ => unreachable!(),
            })
            .collect();
        for _ in 0..40 {
            let f = random_automorphism(pl, &mut rng);
            let mut cover: BTreeSet<ProjPoint> =
                base.iter().map(|&p| pl.apply_automorphism(&f, p)).collect();
            while cover.len() < q as usize - 2 && rng.gen_bool(0.5) {
                cover.insert(pl.point_at(rng.gen_range(0..pl.points().len())));
            }
            let input: Vec<ProjPoint> = cover.into_iter().collect();
            let trace = normalize_cover_traced(pl, &input).unwrap();
            let mut prev = input.len();
            for stage in &trace {
                assert!(pl.wind_rose_report(stage).covered);
                assert!(stage.len() <= prev);
                prev = stage.len();
            }
            let out = trace.last().unwrap();
            let count = |c| out.iter().filter(|p| p.class() == c).count();
            assert_eq!(
                (count(PointClass::Cardinal), count(PointClass::Coast)),
                (1, 1)
            );
            let board = extract(pl, out).unwrap();
            assert!(is_cover(&board).covered);
            assert_eq!(board.len(), out.len() - 2);
        }
    }
}
