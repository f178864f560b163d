mod common;

use common::corpus;
use dconormal::conormal::{conormal_ideal, fiber_ideal, nash_ideal, AffineVariety};
use dconormal::exactpoly::{ideal_dimension, rational, Polynomial, Rational};
use dconormal::grassmann::{chart_cover, matrix_from_plane, plane_from_matrix, PlaneBasis, PlaneMatrix};
use dconormal::numlin::C64;
use dconormal::sample::{curves_into_origin, sample_smooth_points, PolySystem, ProjectionSettings};
use num_traits::ToPrimitive;

/// `|g(x)|` against `Σ|c| · max(1, |x|∞)^deg g`.
fn relative_residual(g: &Polynomial, x: &[C64]) -> f64 {
    let coeffs: f64 = g.terms().iter().map(|(_, c)| c.to_f64().unwrap().abs()).sum();
    let size = x.iter().map(|z| z.norm()).fold(1.0, f64::max);
    g.eval_complex(x).norm() / (coeffs * size.powi(g.total_degree() as i32))
}

#[test]
fn conormal_charts_agree_on_overlaps() {
    let settings = ProjectionSettings {
        tol: 1e-12,
        max_iterations: 200,
    };
    for (file, d) in [("cone3.var", 2), ("umbrella.var", 2), ("line3.var", 2), ("plane4.var", 3)] {
        let x = corpus(file);
        let charts = chart_cover(x.n(), d).unwrap();
        let pieces: Vec<_> = charts.iter().map(|c| conormal_ideal(&x, d, c).unwrap()).collect();
        let mut checked = 0;
        for (si, source) in pieces.iter().enumerate() {
            if source.is_empty().unwrap() {
                continue;
            }
            let gb = source.ideal().groebner_basis().unwrap().polynomials();
            let system = PolySystem::new(source.ring(), &gb);
            let total = x.n() + source.chart().num_a();
            let codim = total - ideal_dimension(source.ideal()).unwrap();
            let points = sample_smooth_points(&system, codim, 50, 11 + si as u64, 1.0, &settings).unwrap();
            for p in &points {
                let (z, a) = p.split_at(x.n());
                let plane = plane_from_matrix(&PlaneMatrix::from_flat(source.chart(), a).unwrap());
                for target in pieces.iter().filter(|t| t.chart() != source.chart()) {
                    let Ok(b) = matrix_from_plane(target.chart(), &plane) else {
                        continue;
                    };
                    let mut q = z.to_vec();
                    q.extend(b.flat());
                    for g in target.ideal().generators() {
                        let r = relative_residual(g, &q);
                        assert!(r < 1e-8, "{file}: chart {} -> {}: residual {r:e} for {g}", source.chart().label(), target.chart().label());
                    }
                    checked += 1;
                }
            }
        }
        assert!(checked >= 50, "{file}: only {checked} overlap points");
    }
}

#[test]
fn cone_fiber_at_origin_contains_limit_planes() {
    let x = corpus("cone3.var");
    let chart = &chart_cover(3, 2).unwrap()[0];
    let nash = nash_ideal(&x, chart).unwrap();
    let fiber = fiber_ideal(&nash, &[rational(0, 1), rational(0, 1), rational(0, 1)]).unwrap();
    assert_eq!(fiber.canonical_strings().unwrap(), vec!["a11^2 + a12^2 + 1"]);
    let system = PolySystem::new(x.ring(), x.ideal().generators());
    let curves = curves_into_origin(&system, 1, 200, 5).unwrap();
    let mut a11s = Vec::new();
    for c in &curves {
        let p = c.point(&system, 1e-7).unwrap();
        let t = system.tangent_space(&p);
        let basis = PlaneBasis::new(3, t.basis().columns()).unwrap();
        let Ok(a) = matrix_from_plane(chart, &basis) else {
            continue;
        };
        let flat = a.flat();
        for g in fiber.generators() {
            let r = relative_residual(g, &flat);
            assert!(r < 1e-6, "limit plane {flat:?} misses the fiber: {r:e}");
        }
        a11s.push(flat[0]);
    }
    assert!(a11s.len() >= 150);
    let spread = a11s.iter().flat_map(|u| a11s.iter().map(move |v| (u - v).norm())).fold(0.0, f64::max);
    assert!(spread > 0.5, "limit planes do not fill the fiber: spread {spread}");
}

fn fiber_dim_over_cover(x: &AffineVariety, d: usize, p: &[Rational]) -> usize {
    chart_cover(x.n(), d)
        .unwrap()
        .iter()
        .filter_map(|chart| {
            let f = fiber_ideal(&conormal_ideal(x, d, chart).unwrap(), p).unwrap();
            (!f.is_unit().unwrap()).then(|| ideal_dimension(&f).unwrap())
        })
        .max()
        .expect("fiber is nonempty")
}

#[test]
fn smooth_fibers_have_grassmannian_dimension() {
    let q = |n: i64| rational(n, 1);
    let umbrella = corpus("umbrella.var");
    for (a, b) in [(1, 1), (2, -1), (-3, 2), (1, 0), (5, 3)] {
        let p = [q(a * b), q(a), q(b * b)];
        assert_eq!(fiber_dim_over_cover(&umbrella, 2, &p), 0);
    }
    let line = corpus("line3.var");
    for t in [0, 1, -7] {
        for d in 1..=2 {
            assert_eq!(fiber_dim_over_cover(&line, d, &[q(t), q(0), q(0)]), (d - 1) * (3 - d), "line d={d}");
        }
    }
    let plane = corpus("plane4.var");
    for (s, t) in [(0, 0), (2, -5)] {
        for d in 2..=3 {
            assert_eq!(fiber_dim_over_cover(&plane, d, &[q(s), q(t), q(0), q(0)]), (d - 2) * (4 - d), "plane d={d}");
        }
    }
}
