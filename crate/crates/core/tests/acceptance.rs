//! Acceptance criteria, one line each. Runs as a plain binary so the lines
//! are always printed; the process fails if any criterion fails.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;

use waring::apolar_ideals::{
    dim_j, dim_perp_cap_alpha0, dim_vsp, dimension_difference_rhs, hilbert_s_mod_j, make_ci_ideal, PhiTuple,
};
use waring::exact_arith::{dim_graded_piece, CycloScalar};
use waring::linalg::DEFAULT_RANK_CUTOFF;
use waring::monomial_waring::{
    coefficient_cm, explicit_decomposition, multinomial_c, rank_lower_bound, verify_decomposition, waring_rank,
    MonomialSpec,
};
use waring::polynomial::{parse_poly, Exponent, Ring};
use waring::quotient_solver::{
    build_quotient, explicit_points, extract_points, fit_coefficients, ideal_membership, is_radical,
    trace_form_rank, PointSet, DEFAULT_CLUSTER_TOL,
};
use waring::scalar::Scalar;
use waring::vsp_explorer::{
    canonical_points, dim_ideal_t, fit_phi_from_points, match_point_sets, point_ideal_hilbert_with,
    q_t_diagnostic, sample_phi, torus_normalize, VSPParameterSpace, DEFAULT_FIT_TOL,
};
use waring::Error;

/// Trace-form rank of the non-radical example `(b^3 - a^2 c, c^4 - a^2 b^2)`.
const EXAMPLE_TRACE_RANK: usize = 11;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

/// Non-decreasing positive tuples with `len <= max_vars` and sum `<= max_total`.
fn sorted_grid(max_vars: usize, max_total: u32) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, max_vars: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == max_vars {
            return;
        }
        let lo = prefix.last().copied().unwrap_or(1);
        for d in lo..=remaining {
            prefix.push(d);
            extend(prefix, max_vars, remaining - d, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), max_vars, max_total, &mut out);
    out
}

fn spec_of(exps: &[u32]) -> MonomialSpec {
    MonomialSpec::new(exps).unwrap()
}

/// The first `count` seeds whose sampled tuple is radical.
fn radical_samples(spec: &MonomialSpec, count: usize) -> Vec<(u64, PhiTuple<BigRational>)> {
    let space = VSPParameterSpace::new(spec);
    (0..)
        .map(|seed| (seed, sample_phi(&space, seed)))
        .filter(|(_, phi)| is_radical(spec, phi).unwrap())
        .take(count)
        .collect()
}

fn sample_points(spec: &MonomialSpec, phi: &PhiTuple<BigRational>, seed: u64) -> Result<PointSet<Complex64>, String> {
    let q = build_quotient(spec, phi).map_err(|e| e.to_string())?;
    let pts = extract_points(&q, DEFAULT_CLUSTER_TOL, seed).map_err(|e| format!("{spec}: {e}"))?;
    ensure(pts.len() as u64 == waring_rank(spec), || format!("{spec} seed {seed}: {} points", pts.len()))?;
    Ok(pts)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let named = [("x*y*z", 4), ("x*y*z*w", 8), ("x*y*z^2", 6)];
    for (text, want) in named {
        let spec: MonomialSpec = text.parse().map_err(|e: Error| e.to_string())?;
        ensure(waring_rank(&spec) == want, || format!("rank({text}) = {}", waring_rank(&spec)))?;
    }
    let mut count = 0;
    for len in 1..=5u32 {
        for code in 0..5u32.pow(len) {
            let exps: Vec<u32> = (0..len).map(|i| code / 5u32.pow(i) % 5 + 1).collect();
            // product of (d_i + 1) over all but one copy of the smallest exponent
            let all: u64 = exps.iter().map(|&d| u64::from(d) + 1).product();
            let oracle = all / (u64::from(*exps.iter().min().unwrap()) + 1);
            let spec = spec_of(&exps);
            ensure(waring_rank(&spec) == oracle, || format!("rank{exps:?} = {}", waring_rank(&spec)))?;
            ensure(rank_lower_bound(&spec) <= oracle, || format!("lower bound above rank for {exps:?}"))?;
            count += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{count} exponent tuples, {:.2?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let grid = sorted_grid(4, 8);
    grid.par_iter().try_for_each(|exps| {
        let spec = spec_of(exps);
        let dec = explicit_decomposition(&spec);
        ensure(dec.len() as u64 == waring_rank(&spec), || format!("{spec}: {} summands", dec.len()))?;
        let report = verify_decomposition(&spec, &dec, 0.0).map_err(|e| e.to_string())?;
        ensure(report.passed && report.difference.is_none(), || format!("{spec}: nonzero difference"))
    })?;
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!("{} monomials, exact zero difference, {:.2?}", grid.len(), start.elapsed()))
}

fn criterion_3() -> Outcome {
    let grid: Vec<Vec<u32>> = sorted_grid(3, 8);
    let checked: usize = grid
        .par_iter()
        .map(|exps| {
            let spec = spec_of(exps);
            let target = Exponent(exps.clone());
            // C = d! / prod d_i! * prod_{i >= 1} (d_i + 1)
            let fact = |k: u32| (1..=k).fold(BigRational::from_i64(1), |acc, j| acc * BigRational::from_i64(i64::from(j)));
            let c_oracle = exps.iter().fold(fact(spec.degree()), |acc, &d| acc / fact(d))
                * BigRational::from_i64(waring_rank(&spec) as i64);
            ensure(multinomial_c(&spec) == c_oracle, || format!("{spec}: C = {}", multinomial_c(&spec)))?;
            let expansion = explicit_decomposition(&spec).expand();
            let mut count = 0;
            for m in Exponent::all_of_degree(spec.num_vars(), spec.degree()) {
                let cm = coefficient_cm(&spec, &m).map_err(|e| e.to_string())?;
                let want = if m == target { CycloScalar::one() } else { CycloScalar::zero() };
                ensure(cm == want, || format!("{spec}: C_{:?} = {cm}", m.0))?;
                ensure(expansion.coeff(&m) == cm, || format!("{spec}: expansion disagrees at {:?}", m.0))?;
                count += 1;
            }
            Ok(count)
        })
        .collect::<Result<Vec<usize>, String>>()?
        .iter()
        .sum();
    Ok(format!("{checked} coefficients over {} monomials", grid.len()))
}

/// Grid `n <= 2, d <= 7` for the sampling criteria.
fn sampling_grid() -> Vec<MonomialSpec> {
    sorted_grid(3, 7).iter().map(|e| spec_of(e)).collect()
}

fn hilbert_agrees<S: waring::linalg::LinearAlgebra>(spec: &MonomialSpec, pts: &PointSet<S>) -> Result<(), String> {
    for t in 0..=i64::from(spec.degree()) + 2 {
        let got = point_ideal_hilbert_with(pts, t, DEFAULT_RANK_CUTOFF) as u64;
        let want = hilbert_s_mod_j(spec, t);
        ensure(got == want, || format!("{spec}: h_points({t}) = {got}, h_J({t}) = {want}"))?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let grid = sampling_grid();
    let configs: usize = grid
        .par_iter()
        .map(|spec| {
            hilbert_agrees(spec, &explicit_points(spec).to_complex())?;
            let samples = radical_samples(spec, 20);
            for (seed, phi) in &samples {
                hilbert_agrees(spec, &sample_points(spec, phi, *seed)?)?;
            }
            Ok(1 + samples.len())
        })
        .collect::<Result<Vec<usize>, String>>()?
        .iter()
        .sum();
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("{configs} point sets on {} monomials, {:.2?}", grid.len(), start.elapsed()))
}

fn criterion_5() -> Outcome {
    let mut identities = 0;
    for exps in sorted_grid(4, 8) {
        let spec = spec_of(&exps);
        for t in 0..=i64::from(spec.degree()) + 2 {
            let lhs = i128::from(dim_perp_cap_alpha0(&spec, t)) - i128::from(dim_graded_piece(spec.num_vars(), t - i64::from(spec.d0()) - 1));
            let rhs = i128::from(dim_j(&spec, t - 1)) - i128::from(dim_j(&spec, t - i64::from(spec.d0()) - 1));
            ensure(lhs == rhs, || format!("{spec}, t = {t}: {lhs} != {rhs}"))?;
            ensure(i128::from(dim_perp_cap_alpha0(&spec, t)) == dimension_difference_rhs(&spec, t), || format!("{spec}, t = {t}"))?;
            identities += 1;
        }
    }
    let configs: usize = sampling_grid()
        .par_iter()
        .map(|spec| {
            let samples = radical_samples(spec, 20);
            for (seed, phi) in &samples {
                let pts = sample_points(spec, phi, *seed)?;
                for t in 0..=i64::from(spec.degree()) + 2 {
                    let q_next = q_t_diagnostic(spec, &pts, t + 1, DEFAULT_RANK_CUTOFF).map_err(|e| e.to_string())?;
                    let dim_i = dim_ideal_t(&pts, t, DEFAULT_RANK_CUTOFF);
                    ensure(q_next == dim_i, || format!("{spec} seed {seed}: q_{} = {q_next}, dim I_{t} = {dim_i}", t + 1))?;
                    let q_t = q_t_diagnostic(spec, &pts, t, DEFAULT_RANK_CUTOFF).map_err(|e| e.to_string())?;
                    ensure(q_t as u64 <= dim_j(spec, t - 1), || format!("{spec} seed {seed}: q_{t} = {q_t} > dim J_{}", t - 1))?;
                }
            }
            Ok(samples.len())
        })
        .collect::<Result<Vec<usize>, String>>()?
        .iter()
        .sum();
    Ok(format!("{identities} dimension identities, q_t checks on {configs} radical samples"))
}

fn criterion_6() -> Outcome {
    let s = |t: &str| t.parse::<MonomialSpec>().unwrap();
    ensure(dim_vsp(&s("x^2*y^2*z^2")) == 2, || "dim VSP(x^2y^2z^2) != 2".into())?;
    for n in 0..=4usize {
        for k in 1..=3 {
            let spec = spec_of(&vec![k; n + 1]);
            ensure(dim_vsp(&spec) == n as u64, || format!("dim VSP({spec}) = {}", dim_vsp(&spec)))?;
        }
    }
    let mut checked = 0;
    for exps in sorted_grid(5, 9) {
        let spec = spec_of(&exps);
        let n = spec.n() as u64;
        let equal = exps.iter().all(|&d| d == exps[0]);
        let v = dim_vsp(&spec);
        ensure(v >= n && ((v == n) == equal), || format!("dim VSP({spec}) = {v}, n = {n}"))?;
        checked += 1;
    }
    // standard monomials of degrees 1 and 2 in a, b, c avoiding b^3 and c^4
    let oracle: usize = [1u32, 2]
        .iter()
        .map(|&t| {
            (0..=t).flat_map(|b| (0..=t - b).map(move |c| (b, c))).filter(|&(b, c)| b < 3 && c < 4).count()
        })
        .sum();
    let xy2z3 = s("x*y^2*z^3");
    ensure(dim_vsp(&xy2z3) == 9 && oracle == 9, || format!("dim VSP(xy^2z^3) = {}, oracle {oracle}", dim_vsp(&xy2z3)))?;
    Ok(format!("named values and {checked} monomials"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let spec: MonomialSpec = "x^2*y^2*z^2".parse().unwrap();
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            let phi = PhiTuple::parse(&spec, &format!("{a};{b}")).map_err(|e| e.to_string())?;
            let radical = is_radical(&spec, &phi).map_err(|e| e.to_string())?;
            ensure(radical == (a * b != 0), || format!("phi = ({a}, {b}): radical = {radical}"))?;
            if a * b == 0 {
                let rank = trace_form_rank(&build_quotient(&spec, &phi).unwrap()).unwrap();
                ensure(rank < 9, || format!("phi = ({a}, {b}): trace rank {rank}"))?;
            }
        }
    }
    let spec: MonomialSpec = "x*y^2*z^3".parse().unwrap();
    let phi = PhiTuple::parse(&spec, "c; b^2").unwrap();
    ensure(!is_radical(&spec, &phi).unwrap(), || "example ideal reported radical".into())?;
    let rank = trace_form_rank(&build_quotient(&spec, &phi).unwrap()).unwrap();
    ensure(rank < 12 && rank == EXAMPLE_TRACE_RANK, || format!("example trace rank {rank}"))?;
    let ideal = make_ci_ideal(&spec, phi, 2).unwrap();
    let p = parse_poly("a^4*b - b^2*c^3", 3, Ring::Dual).unwrap();
    ensure(!ideal_membership(&p, &ideal).unwrap(), || "P reported in I".into())?;
    ensure(ideal_membership(&p.mul(&p), &ideal).unwrap(), || "P^2 reported outside I".into())?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("25 tuples, example trace rank {rank}, P not in I, P^2 in I, {:.2?}", start.elapsed()))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let grid = sampling_grid();
    let fractions = grid
        .par_iter()
        .map(|spec| {
            let space = VSPParameterSpace::new(spec);
            let radical = (0..100).filter(|&seed| is_radical(spec, &sample_phi(&space, seed)).unwrap()).count();
            (spec.clone(), radical as f64 / 100.0)
        })
        .collect::<Vec<_>>();
    let worst = fractions.iter().cloned().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    ensure(worst.1 >= 0.95, || format!("{}: radical fraction {}", worst.0, worst.1))?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("{} monomials, lowest radical fraction {:.2} ({}), {:.2?}", grid.len(), worst.1, worst.0, start.elapsed()))
}

fn criterion_9() -> Outcome {
    let grid = sampling_grid();
    let round_trips: usize = grid
        .par_iter()
        .map(|spec| {
            let space = VSPParameterSpace::new(spec);
            let mut count = 0;
            for seed in 0..100 {
                let phi = sample_phi(&space, seed);
                if !is_radical(spec, &phi).unwrap() {
                    continue;
                }
                let pts = sample_points(spec, &phi, seed)?;
                let fitted = fit_phi_from_points(spec, &pts, DEFAULT_FIT_TOL).map_err(|e| format!("{spec} seed {seed}: {e}"))?;
                for (want, got) in phi.entries().iter().zip(fitted.entries()) {
                    for e in Exponent::all_of_degree(spec.num_vars(), want.degree().unwrap_or(0)) {
                        let err = (want.coeff(&e).to_complex() - got.coeff(&e)).norm();
                        ensure(err <= 1e-8, || format!("{spec} seed {seed}: coefficient error {err:e}"))?;
                    }
                }
                count += 1;
            }
            Ok(count)
        })
        .collect::<Result<Vec<usize>, String>>()?
        .iter()
        .sum();
    // exact coefficients from the explicit points
    grid.par_iter().try_for_each(|spec| {
        let dec = explicit_decomposition(spec);
        let fit = fit_coefficients(spec, &explicit_points(spec), 0.0).map_err(|e| format!("{spec}: {e}"))?;
        let same = dec.summands.iter().zip(&fit.values).all(|(s, c)| &s.coeff == c);
        ensure(same, || format!("{spec}: fitted coefficients differ"))?;
        // rescaling the forms by c_j^(1/d) folds every coefficient into 1
        let d = f64::from(spec.degree());
        let scaled: Vec<Vec<Complex64>> = explicit_points(spec)
            .points
            .iter()
            .zip(&fit.values)
            .map(|(p, c)| {
                let root = c.to_complex().powf(1.0 / d);
                p.iter().map(|x| x.to_complex() * root).collect()
            })
            .collect();
        let ones = fit_coefficients(spec, &PointSet::from_raw(scaled), 1e-9).map_err(|e| format!("{spec}: {e}"))?;
        let err = ones.values.iter().map(|c| (c - 1.0).norm()).fold(0.0, f64::max);
        ensure(err < 1e-9, || format!("{spec}: folded coefficients off by {err:e}"))
    })?;
    Ok(format!("{round_trips} sampled tuples recovered, exact coefficients on {} monomials", grid.len()))
}

fn criterion_10() -> Outcome {
    let mut checked = 0;
    for n in 1..=3usize {
        for k in 1..=3u32 {
            let spec = spec_of(&vec![k; n + 1]);
            let canonical = canonical_points(&spec).map_err(|e| e.to_string())?;
            let samples = radical_samples(&spec, 25);
            let results = samples
                .par_iter()
                .map(|(seed, phi)| {
                    let (torus, ones) = torus_normalize(&spec, phi).map_err(|e| e.to_string())?;
                    let defect = torus.product_defect(&spec);
                    ensure(defect <= 1e-10, || format!("{spec} seed {seed}: prod lambda^k off by {defect:e}"))?;
                    ensure(ones.entries().iter().all(|e| e.coeff(&Exponent::zero(n + 1)) == BigRational::from_i64(1)), || "normalized tuple is not all ones".into())?;
                    let moved = torus.apply(&sample_points(&spec, phi, *seed)?).map_err(|e| e.to_string())?;
                    let residual = match_point_sets(&moved, &canonical, 1e-8);
                    ensure(residual.is_some(), || format!("{spec} seed {seed}: transformed points miss the canonical set"))
                })
                .collect::<Vec<_>>();
            for r in results {
                r?;
            }
            checked += samples.len();
        }
    }
    let unequal: MonomialSpec = "x*y^2*z^3".parse().unwrap();
    let refused = matches!(torus_normalize(&unequal, &PhiTuple::<BigRational>::explicit(&unequal)), Err(Error::UnequalExponents));
    ensure(refused, || "unequal exponents were not refused".into())?;
    ensure(dim_vsp(&unequal) > unequal.n() as u64, || "dim VSP does not exceed n".into())?;
    Ok(format!("{checked} samples mapped onto the canonical points"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("rank table", criterion_1),
        ("explicit decomposition identity", criterion_2),
        ("coefficient analysis", criterion_3),
        ("Hilbert function agreement", criterion_4),
        ("dimension identities and q_t", criterion_5),
        ("VSP dimension", criterion_6),
        ("radicality dichotomies", criterion_7),
        ("genericity of radical samples", criterion_8),
        ("round trip", criterion_9),
        ("torus transitivity", criterion_10),
    ];
    let filter: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if filter.is_some_and(|f| f != i + 1) {
            continue;
        }
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
