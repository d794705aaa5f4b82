//! Acceptance suite: one test per criterion, each exercising the full
//! advertised property at its exact tolerance (which is always zero — all
//! arithmetic is rational).

mod tensor_oracle;

use num_traits::Zero;
use parconf_core::admissible::{d_compatible, multiplicative};
use parconf_core::flatconn::{
    decompose_flat_with, default_grid, grid_enumerate_flat, is_flat, is_rank_one, verify_m3res,
    DEFAULT_BUDGET,
};
use parconf_core::holonomy::QuotientContext;
use parconf_core::lie::LieExpr;
use parconf_core::linalg::rat;
use parconf_core::model::CurveKind;
use parconf_core::resonance::ComponentOrigin;
use parconf_core::*;
use rayon::prelude::*;

fn all_graphs_up_to(n_max: usize) -> Vec<Graph> {
    (1..=n_max).flat_map(Graph::all_labeled).collect()
}

#[test]
fn criterion_01_vanishing_b1_matches_shape() {
    let graphs = all_graphs_up_to(5);
    let count = graphs.len();
    graphs.par_iter().for_each(|g| {
        assert_eq!(
            betti1(0, g) == 0,
            g.b1_zero_by_shape(),
            "shape criterion disagrees on {g}"
        );
    });
    println!("[criterion 1] PASS: b1(F(0,Γ)) = 0 iff shape criterion, {count} graphs (n ≤ 5)");
}

#[test]
fn criterion_02_betti_formulas() {
    let graphs = all_graphs_up_to(4);
    graphs.par_iter().for_each(|graph| {
        for g in 1..=3usize {
            assert_eq!(
                betti1(g, graph),
                2 * g * graph.n(),
                "b1 formula fails at genus {g} on {graph}"
            );
        }
    });
    assert_eq!(betti1(0, &Graph::complete(4)), 2);
    assert_eq!(betti1(0, &Graph::cycle(4)), 1);
    println!(
        "[criterion 2] PASS: b1 = 2gn for g in 1..=3 on {} graphs (n ≤ 4); b1(0,K4)=2, b1(0,C4)=1",
        graphs.len()
    );
}

#[test]
fn criterion_03_quotient_dimensions() {
    let graphs = all_graphs_up_to(5);
    let count = graphs.len();
    graphs.par_iter().for_each(|graph| {
        let e = graph.edge_count();
        let tri = graph.triangles().len();
        for g in 0..=2usize {
            let m = build_model(g, graph);
            assert_eq!(
                m.dim_a2w3,
                2 * g * (graph.n() - 1) * e,
                "weight-3 dimension at g={g} on {graph}"
            );
            assert_eq!(
                m.dim_a2w4,
                e * e.saturating_sub(1) / 2 - tri,
                "weight-4 dimension at g={g} on {graph}"
            );
        }
    });
    println!("[criterion 3] PASS: rank-verified dim A²₃ = 2g(n−1)|E|, dim A²₄ = C(|E|,2) − #K₃ over {count} graphs × g ≤ 2");
}

#[test]
fn criterion_04_resonance_decomposition() {
    let graphs = all_graphs_up_to(4);
    let count = graphs.len();
    graphs.par_iter().for_each(|graph| {
        for g in 0..=2usize {
            let m = build_model(g, graph);
            let comps = resonance_components(&m);
            let positive = comps.iter().filter(|c| c.subspace.dim() >= 1).count();
            let expected = match g {
                0 => graph.k4_subgraphs().len(),
                1 => graph.edge_count(),
                _ => graph.n(),
            };
            // positive-dimensional components are indexed by the admissible
            // maps; the isolated origin appears only when none exist
            if m.cdga.betti1() > 0 {
                assert_eq!(positive, expected, "component count at g={g} on {graph}");
                let zeros = comps
                    .iter()
                    .filter(|c| matches!(c.origin, ComponentOrigin::Zero))
                    .count();
                assert_eq!(zeros, usize::from(positive == 0));
            } else {
                assert!(comps.is_empty());
            }
            for seed in [0u64, 1, 2] {
                let report = verify_decomposition(&m, 25, seed);
                assert!(
                    report.ok(),
                    "violations at g={g} on {graph} seed {seed}: {:?}",
                    report.violations
                );
            }
        }
    });
    println!("[criterion 4] PASS: resonance decomposition verified, 25 samples × 3 seeds, {count} graphs (n ≤ 4) × g ≤ 2");
}

#[test]
fn criterion_05_pullbacks_are_cdga_morphisms() {
    let graphs = all_graphs_up_to(5);
    let count = graphs.len();
    let maps_checked: usize = graphs
        .par_iter()
        .map(|graph| {
            let mut local = 0;
            for g in 0..=2usize {
                let m = build_model(g, graph);
                for f in enumerate_admissible(&m) {
                    assert!(
                        d_compatible(&f, &m),
                        "chain-map failure for {} at g={g} on {graph}",
                        f.label
                    );
                    assert!(
                        multiplicative(&f, &m),
                        "multiplicativity failure for {} at g={g} on {graph}",
                        f.label
                    );
                    // the H¹-image has the full dimension of the curve's H¹
                    let im = image_h1(&f, &m).unwrap();
                    assert_eq!(
                        im.dim(),
                        f.target.cdga.betti1(),
                        "H¹-image dimension for {} at g={g} on {graph}",
                        f.label
                    );
                    local += 1;
                }
            }
            local
        })
        .sum();
    println!("[criterion 5] PASS: {maps_checked} pullbacks over {count} graphs (n ≤ 5) are chain maps and multiplicative");
}

#[test]
fn criterion_06_raw_vs_reduced_presentations() {
    // graded ranks agree through reduced bracket length 3
    let graphs = all_graphs_up_to(3);
    graphs.par_iter().for_each(|graph| {
        for g in 0..=2usize {
            let red = lcs_ranks(&reduced_presentation(g, graph), 3)
                .unwrap()
                .ranks;
            let raw = raw_presentation(&build_model(g, graph));
            if g == 0 {
                // edge duals have weight 2: raw weight 2k matches reduced
                // length k, odd raw weights are empty
                let rr = lcs_ranks(&raw, 6).unwrap().ranks;
                assert_eq!(rr[0], 0, "odd raw weight on {graph}");
                assert_eq!(rr[2], 0, "odd raw weight on {graph}");
                assert_eq!(rr[4], 0, "odd raw weight on {graph}");
                assert_eq!(vec![rr[1], rr[3], rr[5]], red, "raw/reduced at g=0 on {graph}");
            } else {
                let rr = lcs_ranks(&raw, 3).unwrap().ranks;
                assert_eq!(rr, red, "raw/reduced at g={g} on {graph}");
            }
        }
    });

    // the redundant relation families normalize to zero in the quotient
    let mut checked_elements = 0usize;
    let mut targets: Vec<(usize, Graph)> = Vec::new();
    for graph in all_graphs_up_to(4) {
        targets.push((1, graph));
    }
    for graph in all_graphs_up_to(4) {
        targets.push((2, graph));
    }
    let counts: Vec<usize> = targets
        .par_iter()
        .map(|(g, graph)| derived_relations_vanish(*g, graph))
        .collect();
    checked_elements += counts.iter().sum::<usize>();
    println!("[criterion 6] PASS: raw and reduced ranks agree (n ≤ 3, g ≤ 2); {checked_elements} derived redundancy elements vanish in the quotient");
}

/// Asserts that the derived consequences of the reduced relations — brackets
/// of disjoint edge classes, `[a_i + a_j, C_ij]`, the triangle combinations,
/// and path brackets with an open end — normalize to zero. Returns the
/// number of elements checked.
fn derived_relations_vanish(g: usize, graph: &Graph) -> usize {
    let n = graph.n();
    let p = reduced_presentation(g, graph);
    let q = QuotientContext::new(&p, 4).unwrap();
    let a = |i: usize, s: usize| LieExpr::gen(i * 2 * g + 2 * (s - 1));
    let b = |i: usize, s: usize| LieExpr::gen(i * 2 * g + 2 * (s - 1) + 1);
    let c = |i: usize, j: usize| LieExpr::br(a(i.min(j), 1), b(i.max(j), 1));
    let plus = |x: LieExpr, y: LieExpr| LieExpr::sum(vec![(rat(1), x), (rat(1), y)]);
    let mut count = 0;
    let mut check = |e: LieExpr, what: &str| {
        assert!(
            q.is_zero(&e).unwrap(),
            "{what} fails to vanish at g={g} on {graph}"
        );
        count += 1;
    };
    // disjoint edge classes commute, whatever the edge set
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                for l in k + 1..n {
                    if [i, j, k, l].iter().collect::<std::collections::BTreeSet<_>>().len() == 4
                        && (i, j) < (k, l)
                    {
                        check(LieExpr::br(c(i, j), c(k, l)), "disjoint bracket");
                    }
                }
            }
        }
    }
    // [a_i^s + a_j^s, C_ij] and the b-side, weight 3
    for i in 0..n {
        for j in i + 1..n {
            for s in 1..=g {
                check(LieExpr::br(plus(a(i, s), a(j, s)), c(i, j)), "edge-stabilizer a");
                check(LieExpr::br(plus(b(i, s), b(j, s)), c(i, j)), "edge-stabilizer b");
            }
        }
    }
    // triangle combination and open-path bracket
    for [i, j, k] in graph.triangles() {
        check(
            LieExpr::br(plus(c(i, j), c(j, k)), c(i, k)),
            "triangle combination",
        );
    }
    for &(i, j) in graph.edges() {
        for &(k, l) in graph.edges() {
            if (i, j) >= (k, l) {
                continue;
            }
            let shared: Vec<usize> = [i, j].into_iter().filter(|v| *v == k || *v == l).collect();
            if shared.len() == 1 {
                let s = shared[0];
                let (o1, o2) = (i + j - s, k + l - s);
                if !graph.has_edge(o1, o2) {
                    check(LieExpr::br(c(i, j), c(k, l)), "open path bracket");
                }
            }
        }
    }
    count
}

#[test]
fn criterion_07_lcs_rank_oracles() {
    use tensor_oracle::{b, g, oracle_ranks, s};

    // reduced presentation of the genus-1 two-vertex model, hand-expanded
    let rels_k2 = vec![
        b(g(0), g(2)),                            // [a0, a1]
        b(g(1), g(3)),                            // [b0, b1]
        s(vec![(1, b(g(0), g(3))), (-1, b(g(2), g(1)))]), // C via either end
        s(vec![(1, b(g(0), g(3))), (1, b(g(0), g(1)))]),  // surface relation at 0
        s(vec![(1, b(g(0), g(3))), (1, b(g(2), g(3)))]),  // surface relation at 1
    ];
    let oracle_k2 = oracle_ranks(&[1, 1, 1, 1], &rels_k2, 4);
    assert_eq!(oracle_k2, vec![4, 1, 2, 3]);
    let engine_k2 = lcs_ranks(&reduced_presentation(1, &Graph::complete(2)), 4)
        .unwrap()
        .ranks;
    assert_eq!(engine_k2, vec![4, 1, 2, 3]);

    // genus 0 on K4: generators indexed like the sorted edge list
    let k4 = Graph::complete(4);
    let eidx = |i: usize, j: usize| k4.edge_index(i, j).unwrap();
    let ce = |i: usize, j: usize| g(eidx(i, j));
    let mut rels_k4 = Vec::new();
    for v in 0..4 {
        let terms: Vec<(i64, tensor_oracle::T)> = (0..4)
            .filter(|u| *u != v)
            .map(|u| (1, ce(v.min(u), v.max(u))))
            .collect();
        rels_k4.push(s(terms));
    }
    for (e1, e2) in [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))] {
        rels_k4.push(b(ce(e1.0, e1.1), ce(e2.0, e2.1)));
    }
    for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        rels_k4.push(s(vec![
            (1, b(ce(i, j), ce(i, k))),
            (1, b(ce(j, k), ce(i, k))),
        ]));
        rels_k4.push(s(vec![
            (1, b(ce(i, j), ce(j, k))),
            (1, b(ce(i, k), ce(j, k))),
        ]));
        rels_k4.push(s(vec![
            (1, b(ce(i, k), ce(i, j))),
            (1, b(ce(j, k), ce(i, j))),
        ]));
    }
    let oracle_k4 = oracle_ranks(&[1; 6], &rels_k4, 4);
    assert_eq!(oracle_k4, vec![2, 1, 2, 3]);
    let engine_k4 = lcs_ranks(&reduced_presentation(0, &Graph::complete(4)), 4)
        .unwrap()
        .ranks;
    assert_eq!(engine_k4, vec![2, 1, 2, 3]);

    for n in 1..=3usize {
        assert_eq!(
            lcs_ranks(&reduced_presentation(1, &Graph::edgeless(n)), 3)
                .unwrap()
                .ranks,
            vec![2 * n, 0, 0],
            "abelian ranks at n={n}"
        );
    }
    assert_eq!(
        lcs_ranks(&reduced_presentation(0, &Graph::complete(3)), 2)
            .unwrap()
            .ranks,
        vec![0, 0]
    );
    println!("[criterion 7] PASS: engine ranks equal tensor-algebra oracle: L(1,K2)=(4,1,2,3), L(0,K4)=(2,1,2,3); abelian and trivial cases exact");
}

#[test]
fn criterion_08_formality_classifier() {
    let graphs = all_graphs_up_to(5);
    let count = graphs.len();
    for graph in &graphs {
        let has_triangle = !graph.triangles().is_empty();
        for g in 0..=3usize {
            let verdict = formality_classify(g, graph);
            let expected = if g == 1 && has_triangle {
                Formality::FilteredFormalNotOneFormal
            } else {
                Formality::OneFormal
            };
            assert_eq!(verdict, expected, "formality at g={g} on {graph}");
        }
    }
    println!("[criterion 8] PASS: 1-formality fails exactly at g = 1 with a triangle, {count} graphs (n ≤ 5)");
}

struct GridRun {
    genus: usize,
    graph: Graph,
    kind: LieAlgKind,
    expected_exponent: u32,
}

fn grid_runs() -> Vec<GridRun> {
    vec![
        GridRun {
            genus: 1,
            graph: Graph::complete(2),
            kind: LieAlgKind::Sol2,
            expected_exponent: 10,
        },
        GridRun {
            genus: 1,
            graph: Graph::complete(2),
            kind: LieAlgKind::Sl2,
            expected_exponent: 15,
        },
        GridRun {
            genus: 0,
            graph: Graph::complete(4),
            kind: LieAlgKind::Sol2,
            expected_exponent: 12,
        },
        GridRun {
            genus: 1,
            graph: Graph::edgeless(2),
            kind: LieAlgKind::Sol2,
            expected_exponent: 8,
        },
    ]
}

#[test]
fn criterion_09_flat_decomposition_exhaustive() {
    for run in grid_runs() {
        let m = build_model(run.genus, &run.graph);
        let alg = MatrixLieAlgebra::of_kind(run.kind);
        assert_eq!(
            (m.dim1() * alg.dim()) as u32,
            run.expected_exponent,
            "candidate space size drifted"
        );
        let maps = enumerate_admissible(&m);
        let flats = grid_enumerate_flat(&m.cdga, &alg, &default_grid(), DEFAULT_BUDGET).unwrap();
        let mut rank_one = 0usize;
        let mut via_map = 0usize;
        for f in &flats {
            match decompose_flat_with(&maps, &m, &alg, f) {
                FlatDecomposition::RankOne => rank_one += 1,
                FlatDecomposition::ViaMap { .. } => via_map += 1,
                other => panic!(
                    "decomposition failure at g={} {:?} on {}: {other:?}\n{f}",
                    run.genus, run.kind, run.graph
                ),
            }
        }
        // with no edges every flat connection is decomposable of rank one
        if run.graph.edge_count() == 0 {
            assert_eq!(via_map, 0);
            assert!(flats.iter().all(|f| is_rank_one(&m.cdga, f)));
        }
        println!(
            "[criterion 9] g={} {:?} on {}: 3^{} candidates, {} flat ({} rank-one, {} via maps), 0 failures",
            run.genus,
            run.kind,
            run.graph,
            run.expected_exponent,
            flats.len(),
            rank_one,
            via_map
        );
    }
    println!("[criterion 9] PASS: every grid flat decomposes as rank-one or a pullback");
}

#[test]
fn criterion_10_covariant_resonance_matches_decomposition() {
    for run in grid_runs() {
        if run.kind != LieAlgKind::Sol2 || run.graph.edge_count() == 0 {
            continue;
        }
        let m = build_model(run.genus, &run.graph);
        let alg = MatrixLieAlgebra::of_kind(run.kind);
        let maps = enumerate_admissible(&m);
        let rep = Representation::standard(alg.clone());
        let flats = grid_enumerate_flat(&m.cdga, &alg, &default_grid(), DEFAULT_BUDGET).unwrap();
        let report = verify_m3res(&m, &maps, &rep, &flats).unwrap();
        assert!(
            report.ok(),
            "covariant resonance mismatches at g={} on {}: {:?}",
            run.genus,
            run.graph,
            report.mismatches
        );
        println!(
            "[criterion 10] g={} on {}: {} flats, 0 mismatches",
            run.genus, run.graph, report.checked
        );
    }
    println!("[criterion 10] PASS: covariant H¹ ≥ 1 iff Π ∪ pullback membership on every sol₂ grid flat");
}

#[test]
fn criterion_11_holonomy_flat_equivalence() {
    for run in grid_runs() {
        if run.kind != LieAlgKind::Sol2 {
            continue;
        }
        let m = build_model(run.genus, &run.graph);
        let alg = MatrixLieAlgebra::of_kind(run.kind);
        let raw = raw_presentation(&m);
        let grid = default_grid();
        let dims = m.dim1() * alg.dim();
        let total = 3u64.pow(dims as u32);
        let scanner_count = grid_enumerate_flat(&m.cdga, &alg, &grid, DEFAULT_BUDGET)
            .unwrap()
            .len();
        let exact_count: usize = (0..total)
            .into_par_iter()
            .map(|idx| {
                let mut digits = vec![0usize; dims];
                let mut rem = idx;
                for slot in (0..dims).rev() {
                    digits[slot] = (rem % 3) as usize;
                    rem /= 3;
                }
                let coeffs = QMatrix::from_fn(m.dim1(), alg.dim(), |p, k| {
                    grid[digits[p * alg.dim() + k]].clone()
                });
                let flat = is_flat(&m.cdga, &alg, &coeffs).unwrap();
                let images: Vec<QMatrix> = (0..m.dim1())
                    .map(|p| alg.from_coords(coeffs.row(p)))
                    .collect();
                let hom = lie_hom_check(&raw, &alg, &images).unwrap();
                assert_eq!(
                    flat, hom,
                    "flatness and holonomy-homomorphism disagree at g={} on {}:\n{coeffs}",
                    run.genus, run.graph
                );
                usize::from(flat)
            })
            .sum();
        assert_eq!(exact_count, scanner_count, "integer scanner disagrees with exact arithmetic");
        println!(
            "[criterion 11] g={} on {}: 3^{} candidates, {} flat, holonomy check agrees everywhere",
            run.genus, run.graph, dims, exact_count
        );
    }
    println!("[criterion 11] PASS: Maurer–Cartan solutions correspond exactly to holonomy Lie algebra homomorphisms");
}

#[test]
fn criterion_12_pushforward_flat_but_not_rank_one() {
    let b = build_curve_model(CurveKind::EllipticPunctured);
    let alg = MatrixLieAlgebra::sl2();
    // x ⊗ E + y ⊗ F − g' ⊗ H
    let mut src = QMatrix::zeros(3, 3);
    src[(0, 1)] = rat(1);
    src[(1, 2)] = rat(1);
    src[(2, 0)] = rat(-1);
    assert!(is_flat(&b.cdga, &alg, &src).unwrap());

    let m = build_model(1, &Graph::complete(2));
    let maps = enumerate_admissible(&m);
    let pushed = maps[0].pullback_deg1.mul(&src);
    assert!(is_flat(&m.cdga, &alg, &pushed).unwrap());
    assert!(!is_rank_one(&m.cdga, &pushed));
    assert_eq!(pushed.rank(), 3);
    assert!(
        !mc_nonzero(&m, &alg, &pushed),
        "pushforward must satisfy Maurer–Cartan exactly"
    );
    println!("[criterion 12] PASS: the elliptic connection x⊗E + y⊗F − g'⊗H pushes forward flat and non-decomposable-as-rank-one at (g=1, K2)");
}

fn mc_nonzero(m: &OSModel, alg: &MatrixLieAlgebra, coeffs: &QMatrix) -> bool {
    parconf_core::flatconn::mc_residual(&m.cdga, alg, coeffs)
        .unwrap()
        .iter()
        .any(|c| !c.is_zero())
}
