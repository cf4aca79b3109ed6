use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use parakahler::equivariant::{level_curve, LevelPart, PolarBranch};
use parakahler::lagrangian::{angle_field, build_gradient_graph, rotate, GradientSource, FD_LAGRANGIAN_TOL};
use parakahler::linalg::{gram_identity_check, random_lagrangian_frame};
use parakahler::soliton::{first_integral, integrate, vector_field, CausalCase, IntegrateOptions, SolitonParams, SolitonState, DRIFT_GATE};
use parakahler::{Axis, DMatrix, Grid, ParaComplex};

fn polar_value() -> impl Strategy<Value = ParaComplex> {
    (prop_oneof![Just(1i8), Just(-1i8)], 0u8..2, 1e-3f64..1e3, -15.0f64..15.0).prop_map(|(p, q, r, th)| {
        let mut z = ParaComplex::exp_tau(th) * r;
        if q == 1 {
            z = ParaComplex::TAU * z;
        }
        if p < 0 {
            z = -z;
        }
        z
    })
}

fn entry() -> impl Strategy<Value = ParaComplex> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(x, y)| ParaComplex::new(x, y))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #[test]
    fn polar_round_trip(z in polar_value()) {
        let back = z.polar().unwrap().reconstruct();
        let (u0, v0) = z.null_coords();
        let (u1, v1) = back.null_coords();
        prop_assert!(rel(u0, u1) < 1e-12 && rel(v0, v1) < 1e-12, "{z} -> {back}");
    }

    #[test]
    fn argument_is_additive(a in polar_value(), b in polar_value()) {
        let (pa, pb, pab) = (a.polar().unwrap(), b.polar().unwrap(), (a * b).polar().unwrap());
        prop_assert!((pab.theta - pa.theta - pb.theta).abs() < 1e-9);
        prop_assert_eq!(pab.q, (pa.q + pb.q) % 2);
        prop_assert_eq!(pab.p, pa.p * pb.p);
    }

    #[test]
    fn norm_is_multiplicative(a in entry(), b in entry()) {
        let lhs = (a * b).squared_norm();
        let rhs = a.squared_norm() * b.squared_norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }

    #[test]
    fn determinant_routes_agree(n in 2usize..5, cells in prop::collection::vec(entry(), 16)) {
        let rows: Vec<Vec<ParaComplex>> = (0..n).map(|i| cells[i * n..(i + 1) * n].to_vec()).collect();
        let m = DMatrix::from_rows(rows).unwrap();
        let (l, b) = (m.det_leibniz(), m.det_bareiss());
        let scale = 1.0 + l.euclid_sq().sqrt();
        prop_assert!((l - b).euclid_sq().sqrt() < 1e-10 * scale, "{l} vs {b}");
    }

    #[test]
    fn gram_identity_on_lagrangian_frames(n in 2usize..5, seed in any::<u64>()) {
        let frame = random_lagrangian_frame(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let (gram, vol) = gram_identity_check(&frame).unwrap();
        prop_assert!(rel(gram, vol) < 1e-9, "{gram} vs {vol}");
    }

    #[test]
    fn rotation_shifts_the_angle(phi0 in -1.0f64..1.0, a in -0.5f64..0.5) {
        let grid = Grid::new(vec![Axis::new(-0.3, 0.3, 7); 2]).unwrap();
        let u = move |x: &[f64]| a * x[0] * x[0] * x[1] + 0.2 * x[1] * x[1];
        let imm = build_gradient_graph(grid, GradientSource::Potential(&u)).unwrap();
        let before = angle_field(&imm, FD_LAGRANGIAN_TOL).unwrap();
        let after = angle_field(&rotate(&imm, phi0).unwrap(), FD_LAGRANGIAN_TOL).unwrap();
        for (x, y) in before.angles.iter().zip(&after.angles) {
            if let (Some(x), Some(y)) = (x, y) {
                prop_assert!((y.theta - x.theta - 2.0 * phi0).abs() < 1e-10);
                prop_assert_eq!(x.q, y.q);
            }
        }
    }

    #[test]
    fn level_curves_stay_on_their_level(n in 2u32..5, c in 0.2f64..3.0, im in any::<bool>()) {
        let part = if im { LevelPart::Im } else { LevelPart::Re };
        // The polar form needs the half of the parameter line where the level equation is solvable.
        let axis = if im { Axis::new(0.05, 1.5, 31) } else { Axis::new(-1.5, 1.5, 31) };
        let curve = level_curve(n, c, part, PolarBranch::default(), axis).unwrap();
        prop_assert!(curve.level_error(n, part, c) < 1e-10 * c.max(1.0));
    }

    #[test]
    fn first_integral_is_conserved_by_the_field(
        n in 2u32..5, lp in -1.0f64..1.0, r in 0.3f64..2.0, alpha in -1.0f64..1.0, lorentzian in any::<bool>()
    ) {
        // dE/ds along the field vanishes: check with a centred difference of E along a short field step.
        let case = if lorentzian { CausalCase::Lorentzian } else { CausalCase::Definite };
        let p = SolitonParams::new(n, lp, case).unwrap();
        let st = SolitonState::new(r, alpha, 0.0);
        let f = vector_field(&st, &p).unwrap();
        let h = 1e-5;
        let at = |sign: f64| {
            first_integral(&SolitonState::new(r + sign * h * f[0], alpha + sign * h * f[1], sign * h * f[2]), &p).unwrap()
        };
        let slope = (at(1.0) - at(-1.0)) / (2.0 * h);
        let scale = first_integral(&st, &p).unwrap().abs() + p.radial_factor(r);
        prop_assert!(slope.abs() < 1e-6 * scale, "dE/ds = {slope}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn integrator_meets_the_drift_gate(
        n in 2u32..4, lp in -1.0f64..1.0, r in 0.3f64..2.5, alpha in -1.5f64..1.5, lorentzian in any::<bool>()
    ) {
        let case = if lorentzian { CausalCase::Lorentzian } else { CausalCase::Definite };
        let p = SolitonParams::new(n, lp, case).unwrap();
        let t = integrate(SolitonState::new(r, alpha, 0.0), &p, 3.0, &IntegrateOptions::default()).unwrap();
        prop_assert!(t.max_drift < DRIFT_GATE, "drift {}", t.max_drift);
    }
}
