//! Property tests over seeded random instances.

use num_complex::Complex64;
use proptest::prelude::*;

use partrace::antinorms::{kp_antinorm, schatten_antinorm};
use partrace::audit::{
    evaluate_case, sample, CaseParams, Form, Instance, Sample, SampleKind, Sampler,
};
use partrace::bipartite::{
    embed_a, partial_trace_a, partial_trace_b, twirl_oracle_b, BipartiteOperator,
};
use partrace::entropy::{
    max_entropy_value, renyi_entropy, unified_entropy, EntropyParams, DENSITY_TRACE_TOL,
};
use partrace::linalg::{
    hermitian_eigenvalues, pauli_x, pauli_z, psd_eigenvalues, psd_power, singular_values,
    HERMITIAN_TOL,
};
use partrace::norms::kp_norm;
use partrace::{kron, ComplexMatrix};

const TOL: f64 = HERMITIAN_TOL;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

/// Power mean oracle: `(Σ_{j<k} x_j^p)^{1/p}` over the `k` largest entries.
fn top_k_power_sum(mut x: Vec<f64>, k: usize, p: f64) -> f64 {
    x.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if p.is_infinite() {
        return x[0];
    }
    x[..k].iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
}

fn hermitian(s: &mut Sampler, dim: usize) -> ComplexMatrix {
    let g = s.ginibre(dim, dim);
    (&g + &g.adjoint()).scale_real(0.5)
}

fn kraus_sum(kraus: &[ComplexMatrix], q: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(kraus[0].rows(), kraus[0].rows());
    for k in kraus {
        out = &out + &q.conjugate_by(k);
    }
    out
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn eigenvalues_sum_to_trace(seed in any::<u64>(), dim in 1usize..=16) {
        let mut s = Sampler::new(seed);
        let m = hermitian(&mut s, dim);
        let sum: f64 = hermitian_eigenvalues(&m, TOL).unwrap().iter().sum();
        let tr = m.trace().re;
        prop_assert!((sum - tr).abs() <= 1e-10 * (1.0 + tr.abs()));
    }

    #[test]
    fn singular_values_are_unitarily_invariant(seed in any::<u64>(), dim in 1usize..=8) {
        let mut s = Sampler::new(seed);
        let q = s.ginibre(dim, dim);
        let (u, v) = (s.unitary(dim), s.unitary(dim));
        let a = singular_values(&q);
        let b = singular_values(&u.matmul(&q).matmul(&v));
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + a[0]));
        }
    }

    #[test]
    fn psd_powers_compose(seed in any::<u64>(), dim in 1usize..=6, a in prop::sample::select(vec![0.5, 2.0]), b in prop::sample::select(vec![0.5, 2.0])) {
        let mut s = Sampler::new(seed);
        let q = s.psd(dim);
        let lhs = psd_power(&psd_power(&q, a, TOL).unwrap(), b, TOL).unwrap();
        let rhs = psd_power(&q, a * b, TOL).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-9 * (1.0 + rhs.max_abs()));
    }

    #[test]
    fn generalized_paulis_are_unitary(n in 1usize..=9) {
        for u in [pauli_x(n), pauli_z(n)] {
            prop_assert!(u.adjoint().matmul(&u).max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-12);
        }
    }

    #[test]
    fn kronecker_mixed_product(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let (a, c) = (s.ginibre(2, 2), s.ginibre(2, 2));
        let (b, d) = (s.ginibre(3, 3), s.ginibre(3, 3));
        let lhs = kron(&a, &b).matmul(&kron(&c, &d));
        let rhs = kron(&a.matmul(&c), &b.matmul(&d));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + rhs.max_abs()));
    }

    #[test]
    fn kp_norm_axioms(seed in any::<u64>(), dim in 1usize..=8, p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 10.0, f64::INFINITY]), c in -3.0f64..3.0) {
        let mut s = Sampler::new(seed);
        let k = s.range(1, dim);
        let (q, r) = (s.ginibre(dim, dim), s.ginibre(dim, dim));
        let (u, v) = (s.unitary(dim), s.unitary(dim));
        let nq = kp_norm(&q, k, p).unwrap();
        prop_assert!(rel(kp_norm(&u.matmul(&q).matmul(&v), k, p).unwrap(), nq) <= 1e-10);
        let nr = kp_norm(&r, k, p).unwrap();
        let sum = kp_norm(&(&q + &r), k, p).unwrap();
        prop_assert!(sum <= nq + nr + 1e-10 * (1.0 + nq + nr));
        prop_assert!(rel(kp_norm(&q.scale_real(c), k, p).unwrap(), c.abs() * nq) <= 1e-12);
        prop_assert!(rel(nq, top_k_power_sum(singular_values(&q), k, p)) <= 1e-12);
        if k < dim {
            prop_assert!(nq <= kp_norm(&q, k + 1, p).unwrap() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn kp_norm_exponent_chain(seed in any::<u64>(), dim in 1usize..=6, p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0]), q in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 10.0])) {
        let mut s = Sampler::new(seed);
        let k = s.range(1, dim);
        let m = s.ginibre(dim, dim);
        let lhs = kp_norm(&m, k, p).unwrap();
        let rhs = (k as f64).powf((q - 1.0) / (p * q)) * kp_norm(&m, k, p * q).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-10));
        // power-mean monotonicity is the same statement
        let sv = singular_values(&m);
        let mean = |t: f64| (sv[..k].iter().map(|x| x.powf(t)).sum::<f64>() / k as f64).powf(1.0 / t);
        prop_assert!(mean(p) <= mean(p * q) * (1.0 + 1e-10));
    }

    #[test]
    fn antinorm_axioms(seed in any::<u64>(), dim in 1usize..=6, p in prop::sample::select(vec![0.25, 0.5, 0.75, 1.0]), c in 0.01f64..5.0) {
        let mut s = Sampler::new(seed);
        let k = s.range(1, dim);
        let (q, r) = (s.psd(dim), s.psd(dim));
        let aq = kp_antinorm(&q, k, p, TOL, None).unwrap();
        let ar = kp_antinorm(&r, k, p, TOL, None).unwrap();
        let sum = kp_antinorm(&(&q + &r), k, p, TOL, None).unwrap();
        prop_assert!(sum >= aq + ar - 1e-9 * (1.0 + sum));
        let u = s.unitary(dim);
        prop_assert!(rel(kp_antinorm(&q.conjugate_by(&u), k, p, TOL, None).unwrap(), aq) <= 1e-10);
        prop_assert!(rel(kp_antinorm(&q.scale_real(c), k, p, TOL, None).unwrap(), c * aq) <= 1e-12);
    }

    #[test]
    fn schatten_antinorm_superadditive(seed in any::<u64>(), dim in 1usize..=6, p in prop::sample::select(vec![0.25, 0.5, 0.75, -0.5, -1.0, -2.0])) {
        let mut s = Sampler::new(seed);
        let (q, r) = if p < 0.0 { (s.pd(dim, 0.1), s.pd(dim, 0.1)) } else { (s.psd(dim), s.psd(dim)) };
        let aq = schatten_antinorm(&q, p, TOL).unwrap();
        let ar = schatten_antinorm(&r, p, TOL).unwrap();
        let sum = schatten_antinorm(&(&q + &r), p, TOL).unwrap();
        prop_assert!(sum >= aq + ar - 1e-9 * (1.0 + sum));
    }

    #[test]
    fn antinorm_exponent_chain(seed in any::<u64>(), dim in 1usize..=6, p in prop::sample::select(vec![0.25, 0.5, 0.75]), q in prop::sample::select(vec![0.25, 0.5, 0.75])) {
        let mut s = Sampler::new(seed);
        let k = s.range(1, dim);
        let m = s.psd(dim);
        let lhs = kp_antinorm(&m, k, p, TOL, None).unwrap();
        let rhs = (k as f64).powf((q - 1.0) / (p * q)) * kp_antinorm(&m, k, p * q, TOL, None).unwrap();
        prop_assert!(lhs >= rhs * (1.0 - 1e-10));
    }

    #[test]
    fn antinorm_vanishes_on_rank_one(seed in any::<u64>(), dim in 2usize..=6, p in prop::sample::select(vec![0.25, 0.5, 1.0])) {
        let mut s = Sampler::new(seed);
        let q = s.psd_with_rank(dim, 1);
        // the k smallest eigenvalues are all zero as long as k <= dim - 1
        let k = s.range(1, dim - 1);
        prop_assert_eq!(kp_antinorm(&q, k, p, TOL, None).unwrap(), 0.0);
        let full = kp_antinorm(&q, dim, 1.0, TOL, None).unwrap();
        prop_assert!(rel(full, q.trace().re) <= 1e-12);
    }

    #[test]
    fn partial_traces_preserve_trace_and_positivity(seed in any::<u64>(), m in 1usize..=4, n in 1usize..=4) {
        let mut s = Sampler::new(seed);
        let w = BipartiteOperator::new(s.psd(m * n), m, n).unwrap();
        let tr = w.matrix().trace();
        for reduced in [partial_trace_b(&w), partial_trace_a(&w)] {
            prop_assert!((reduced.trace() - tr).norm() <= 1e-12 * tr.norm().max(1.0));
            let min = hermitian_eigenvalues(&reduced, TOL).unwrap()[0];
            prop_assert!(min >= -1e-10 * (1.0 + reduced.max_abs()));
        }
    }

    #[test]
    fn twirl_matches_partial_trace(seed in any::<u64>(), m in 1usize..=4, n in 1usize..=4) {
        let mut s = Sampler::new(seed);
        let w = BipartiteOperator::new(s.ginibre(m * n, m * n), m, n).unwrap();
        let embedded = kron(&partial_trace_b(&w), &ComplexMatrix::identity(n));
        prop_assert!(twirl_oracle_b(&w).max_abs_diff(&embedded) <= 1e-10 * (1.0 + w.matrix().max_abs()));
    }

    #[test]
    fn embedding_scales_norms(seed in any::<u64>(), m in 1usize..=4, n in 1usize..=3, p in prop::sample::select(vec![1.0, 2.0, 3.0, f64::INFINITY]), ap in prop::sample::select(vec![0.25, 0.5, 1.0])) {
        let mut s = Sampler::new(seed);
        let k = s.range(1, m);
        let a = s.ginibre(m, m);
        let big = embed_a(&a, n).unwrap().into_matrix();
        let factor = if p.is_infinite() { 1.0 } else { (n as f64).powf(1.0 / p) };
        prop_assert!(rel(kp_norm(&big, k * n, p).unwrap(), factor * kp_norm(&a, k, p).unwrap()) <= 1e-10);
        let r = s.psd(m);
        let big = embed_a(&r, n).unwrap().into_matrix();
        let lhs = kp_antinorm(&big, k * n, ap, TOL, None).unwrap();
        let rhs = (n as f64).powf(1.0 / ap) * kp_antinorm(&r, k, ap, TOL, None).unwrap();
        prop_assert!(rel(lhs, rhs) <= 1e-10);
    }

    #[test]
    fn channels_match_kraus_sums(seed in any::<u64>(), din in 1usize..=4, dout in 1usize..=4, extra in 0usize..=2) {
        let mut s = Sampler::new(seed);
        let denv = din.div_ceil(dout) + extra;
        let ch = s.channel(din, dout, denv).unwrap();
        let q = s.ginibre(din, din);
        let out = ch.apply(&q).unwrap();
        prop_assert!(out.max_abs_diff(&kraus_sum(&ch.kraus(), &q)) <= 1e-12 * (1.0 + q.max_abs()));
        prop_assert!((out.trace() - q.trace()).norm() <= 1e-12 * q.trace().norm().max(1.0));
        let choi = ch.choi_matrix();
        prop_assert!(choi.is_psd(1e-10));
    }

    #[test]
    fn channel_norm_bounds(seed in any::<u64>(), din in 1usize..=4, dout in 1usize..=4, p in prop::sample::select(vec![1.0, 2.0, 3.0]), ap in prop::sample::select(vec![0.25, 0.5, 1.0])) {
        let mut s = Sampler::new(seed);
        let denv = din.div_ceil(dout) + 1;
        let ch = s.channel(din, dout, denv).unwrap();
        let d = ch.choi_rank(partrace::channels::CHOI_RANK_TOL);
        let k = s.range(1, dout);
        let q = s.ginibre(din, din);
        let out = ch.apply(&q).unwrap();
        let mut sv = singular_values(&q);
        sv.resize((k * d).max(sv.len()), 0.0);
        let bound = (d as f64).powf((p - 1.0) / p) * top_k_power_sum(sv, k * d, p);
        let lhs = kp_norm(&out, k, p).unwrap();
        prop_assert!(lhs <= bound + 1e-9 * 1f64.max(bound));
        let r = s.psd(din);
        let out = ch.apply(&r).unwrap();
        let lhs = kp_antinorm(&out, k, ap, TOL, None).unwrap();
        let ambient = (dout * d).max(din);
        let rhs = (d as f64).powf((ap - 1.0) / ap) * kp_antinorm(&r, k * d, ap, TOL, Some(ambient)).unwrap();
        prop_assert!(lhs >= rhs - 1e-9 * 1f64.max(lhs));
    }

    #[test]
    fn entropies_bounded_and_invariant(seed in any::<u64>(), dim in 1usize..=6, alpha in prop::sample::select(vec![0.3, 0.7, 1.5, 3.0]), sv in prop::sample::select(vec![-1.0, 0.0, 0.5, 1.0, 2.0])) {
        let mut s = Sampler::new(seed);
        let rank = s.range(1, dim);
        let rho = s.density_with_rank(dim, rank);
        let params = EntropyParams::new(alpha, sv).unwrap();
        let e = unified_entropy(&rho, params, DENSITY_TRACE_TOL).unwrap();
        prop_assert!(e <= max_entropy_value(dim, params) + 1e-10);
        let u = s.unitary(dim);
        let rotated = unified_entropy(&rho.conjugate_by(&u), params, DENSITY_TRACE_TOL).unwrap();
        prop_assert!((rotated - e).abs() <= 1e-10 * (1.0 + e.abs()));
    }

    #[test]
    fn renyi_two_from_purity(seed in any::<u64>(), dim in 1usize..=6) {
        let mut s = Sampler::new(seed);
        let rho = s.density(dim);
        let purity: f64 = rho.data().iter().map(Complex64::norm_sqr).sum();
        prop_assert!((renyi_entropy(&rho, 2.0, DENSITY_TRACE_TOL).unwrap() + purity.ln()).abs() <= 1e-12);
    }

    #[test]
    fn joint_entropy_bounds(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=3, alpha in prop::sample::select(vec![0.3, 0.7, 1.0, 1.5, 3.0]), sv in prop::sample::select(vec![-1.0, 0.0, 0.5, 1.0, 2.0])) {
        let mut s = Sampler::new(seed);
        let w = s.density(m * n);
        let rho_a = partial_trace_b(&BipartiteOperator::new(w.clone(), m, n).unwrap());
        let params = EntropyParams::new(alpha, sv).unwrap();
        let joint = unified_entropy(&w, params, DENSITY_TRACE_TOL).unwrap();
        let marginal = unified_entropy(&rho_a, params, DENSITY_TRACE_TOL).unwrap();
        let bound = params.dimension_weight(n as f64) * marginal + max_entropy_value(n, params);
        prop_assert!(joint <= bound + 1e-9);
        let r_joint = renyi_entropy(&w, alpha, DENSITY_TRACE_TOL).unwrap();
        let r_marg = renyi_entropy(&rho_a, alpha, DENSITY_TRACE_TOL).unwrap();
        prop_assert!(r_joint <= r_marg + (n as f64).ln() + 1e-9);
    }

    #[test]
    fn channel_entropy_bound(seed in any::<u64>(), din in 1usize..=4, dout in 1usize..=4, alpha in prop::sample::select(vec![0.3, 1.0, 3.0]), sv in prop::sample::select(vec![-1.0, 0.0, 1.0])) {
        let mut s = Sampler::new(seed);
        let ch = s.channel(din, dout, din.div_ceil(dout)).unwrap();
        let d = ch.choi_rank(partrace::channels::CHOI_RANK_TOL);
        let rho = s.density(din);
        let params = EntropyParams::new(alpha, sv).unwrap();
        let input = unified_entropy(&rho, params, DENSITY_TRACE_TOL).unwrap();
        let output = unified_entropy(&ch.apply(&rho).unwrap(), params, DENSITY_TRACE_TOL).unwrap();
        prop_assert!(input <= params.dimension_weight(d as f64) * output + max_entropy_value(d, params) + 1e-9);
    }

    #[test]
    fn kqk1_is_kpk1_at_complementary_k(seed in any::<u64>(), m in 1usize..=4, n in 1usize..=3) {
        let mut s = Sampler::new(seed);
        let w = Instance::Bipartite(BipartiteOperator::new(s.psd(m * n), m, n).unwrap());
        for k in 1..=m {
            let eq = evaluate_case("KQK1", &w, &CaseParams::k(k).with_form(Form::Equivalence)).unwrap();
            prop_assert!(eq.value.abs() <= 1e-10);
        }
    }

    #[test]
    fn multiplicity_equality_conditions(seed in any::<u64>(), dim in 2usize..=5, p in prop::sample::select(vec![1.0, 2.0]), q in prop::sample::select(vec![1.5, 2.0, 3.0])) {
        let mut s = Sampler::new(seed);
        let k = s.range(2, dim);
        let u = s.unitary(dim);
        // top singular value repeated exactly k times
        let top: Vec<f64> = (0..dim).map(|j| if j < k { 4.0 } else { 3.0 - j as f64 * 0.5 }).collect();
        let eq = evaluate_case("TPN2", &Instance::Matrix(ComplexMatrix::from_diag(&top).conjugate_by(&u)), &CaseParams::k(k).with_p(p).with_q(q)).unwrap();
        prop_assert!(eq.value.abs() <= 1e-10);
        // multiplicity k - 1 < k, well separated
        let spread: Vec<f64> = (0..dim).map(|j| if j + 1 < k { 4.0 } else { 3.0 - j as f64 * 0.5 }).collect();
        let gap = evaluate_case("TPN2", &Instance::Matrix(ComplexMatrix::from_diag(&spread).conjugate_by(&u)), &CaseParams::k(k).with_p(p).with_q(q)).unwrap();
        prop_assert!(gap.value > 1e-6);

        let pa = p / 4.0;
        let qa = 1.0 / q;
        let bottom: Vec<f64> = (0..dim).map(|j| if j < k { 0.5 } else { 1.0 + j as f64 }).collect();
        let eq = evaluate_case("TPN62", &Instance::Matrix(ComplexMatrix::from_diag(&bottom).conjugate_by(&u)), &CaseParams::k(k).with_p(pa).with_q(qa)).unwrap();
        prop_assert!(eq.value.abs() <= 1e-10);
        let spread: Vec<f64> = (0..dim).map(|j| if j + 1 < k { 0.5 } else { 1.0 + j as f64 }).collect();
        let gap = evaluate_case("TPN62", &Instance::Matrix(ComplexMatrix::from_diag(&spread).conjugate_by(&u)), &CaseParams::k(k).with_p(pa).with_q(qa)).unwrap();
        prop_assert!(gap.value > 1e-6);
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), dim in 1usize..=5) {
        for kind in [SampleKind::Ginibre, SampleKind::Psd, SampleKind::Pd, SampleKind::Density, SampleKind::Unitary] {
            let (a, b) = (sample(kind, &[dim], seed).unwrap(), sample(kind, &[dim], seed).unwrap());
            match (a, b) {
                (Sample::Matrix(a), Sample::Matrix(b)) => prop_assert_eq!(a, b),
                _ => prop_assert!(false, "matrix kinds return matrices"),
            }
        }
        let rho = match sample(SampleKind::Density, &[dim], seed).unwrap() {
            Sample::Matrix(m) => m,
            _ => unreachable!(),
        };
        prop_assert!((rho.trace().re - 1.0).abs() <= 1e-12);
        prop_assert!(psd_eigenvalues(&rho, TOL).is_ok());
    }
}
