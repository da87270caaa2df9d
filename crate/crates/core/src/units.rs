//! The factors `γ_i = x - λ_i^a y` of `F_{n,a}(x, y)`, their decomposition
//! `γ0 = δ λ0^A λ2^B` over the units `{λ0, λ2}`, the Siegel identity, and
//! the linear form in logarithms `Λ = A' log λ0 + B' log|λ2| + log|μ|`.
//!
//! Everything that is an identity in `Z[λ0]` is checked exactly; real
//! quantities come as certified intervals, with precision raised until each
//! reported comparison is decided.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cubic_order::OrderElement;
use crate::error::{Error, Result};
use crate::forms::eval_form;
use crate::interval::{Dyadic, Interval};
use crate::roots::{interval_log_abs, isolate_roots, RootTriple};
use crate::util::{with_precision, START_PREC};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaTriple {
    pub n: i64,
    pub a: i64,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub x: BigInt,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub y: BigInt,
    /// `γ_i = σ^i(x - λ0^a y)`.
    pub gamma: [OrderElement; 3],
    /// Index of a factor of smallest absolute value (smallest index on ties).
    pub i0: usize,
    /// `F_{n,a}(x, y)`.
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub value: BigInt,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub m: BigInt,
}

impl GammaTriple {
    /// Enclosures of the real numbers `x - λ_i^a y`.
    pub fn embeddings(&self, roots: &RootTriple) -> [Interval; 3] {
        let x = Interval::from_int(self.x.clone());
        roots.powers(self.a).map(|p| &x - &p.mul_int(&self.y))
    }
}

/// `(i0, i0 + 1, i0 + 2)` modulo 3.
pub fn cyclic(i0: usize) -> (usize, usize, usize) {
    (i0 % 3, (i0 + 1) % 3, (i0 + 2) % 3)
}

pub fn gamma_triple(n: i64, a: i64, x: &BigInt, y: &BigInt) -> Result<GammaTriple> {
    if a < 1 {
        return Err(Error::Precondition(format!("gamma triples need a >= 1, got {a}")));
    }
    if n < 0 {
        return Err(Error::Precondition(format!("gamma triples need n >= 0, got {n}")));
    }
    let value = eval_form(n, a, x, y)?;
    if value.is_zero() {
        return Err(Error::ZeroValue);
    }
    let la = OrderElement::lambda0(n).pow(a as u32);
    let g0 = &OrderElement::from_int(n, x.clone()) - &la.scale(y);
    let g1 = g0.galois();
    let g2 = g1.galois();
    let product = &(&g0 * &g1) * &g2;
    if product.as_integer() != Some(&value) {
        return Err(Error::Invariant(format!("gamma product {product} differs from F = {value}")));
    }
    let m = value.abs();
    let mut g = GammaTriple { n, a, x: x.clone(), y: y.clone(), gamma: [g0, g1, g2], i0: 0, value, m };
    g.i0 = select_i0(&g)?;
    Ok(g)
}

fn select_i0(g: &GammaTriple) -> Result<usize> {
    if g.y.is_zero() {
        // all three factors equal x
        return Ok(0);
    }
    let m = Interval::from_int(g.m.clone());
    with_precision(START_PREC, "selecting the smallest factor", |prec| {
        let e = g.embeddings(&isolate_roots(g.n, prec)?).map(|e| e.abs());
        let smallest = (0..3).find(|&i| {
            (0..3).all(|j| j == i || (j < i && e[i].certainly_lt(&e[j])) || (j > i && e[i].certainly_le(&e[j])))
        });
        let Some(i) = smallest else { return Ok(None) };
        match e[i].pow(3).decide_le(&m) {
            None => Ok(None),
            Some(true) => Ok(Some(i)),
            Some(false) => Err(Error::Invariant(format!("smallest factor exceeds m^(1/3) at {:?}", (g.n, g.a)))),
        }
    })
}

/// `log λ0, log|λ1|, log|λ2|` and the regulator `R = (log λ0)^2 - log|λ1| log|λ2|`.
#[derive(Clone, Debug, Serialize)]
pub struct LogSystem {
    pub logs: [Interval; 3],
    pub regulator: Interval,
}

pub fn log_system(roots: &RootTriple) -> Result<LogSystem> {
    let [l0, l1, l2] = [0, 1, 2].map(|i| interval_log_abs(roots.lam(i)));
    let (l0, l1, l2) = (l0?, l1?, l2?);
    let regulator = &l0.sqr() - &(&l1 * &l2);
    Ok(LogSystem { logs: [l0, l1, l2], regulator })
}

impl LogSystem {
    /// Real `(A, B)` with `A log λ0 + B log|λ2| = c0` and
    /// `A log|λ1| + B log λ0 = c1`.
    pub fn solve(&self, c0: &Interval, c1: &Interval) -> Result<(Interval, Interval)> {
        let [l0, _, l2] = &self.logs;
        let a = (&(c0 * l0) - &(c1 * l2)).div(&self.regulator)?;
        let b = (&(&(c0 + c1) * l0) + &(c0 * l2)).div(&self.regulator)?;
        Ok((a, b))
    }
}

/// Solve the regulator system for the given right-hand sides, with roots at
/// the precision the inputs carry.
pub fn regulator_system(n: i64, c0: &Interval, c1: &Interval) -> Result<(Interval, Interval)> {
    if n < 0 {
        return Err(Error::Precondition(format!("regulator system needs n >= 0, got {n}")));
    }
    let prec = c0.prec().max(c1.prec()).max(64);
    log_system(&isolate_roots(n, prec)?)?.solve(c0, c1)
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitDecomposition {
    pub n: i64,
    pub a_exp: i64,
    pub b_exp: i64,
    pub delta: OrderElement,
    /// `|δ_0|, |δ_1|, |δ_2|`.
    pub delta_abs: [Interval; 3],
    /// Real solution of the regulator system before rounding.
    pub a_real: Interval,
    pub b_real: Interval,
    pub regulator: Interval,
    pub c0: Interval,
    pub c1: Interval,
    /// The conjugate bounds are enforced only for `n >= 3`.
    pub bounds_asserted: bool,
    pub bounds_hold: bool,
    /// `(1/3) Σ log max(1, |δ_i|)`.
    pub height: Interval,
    /// `(2/3) log(n+3) + (1/3) log m`.
    pub height_bound: Interval,
    pub height_bound_holds: bool,
}

fn unit_pow(u: &OrderElement, u_inv: &OrderElement, e: i64) -> OrderElement {
    if e >= 0 {
        u.pow(e as u32)
    } else {
        u_inv.pow(e.unsigned_abs() as u32)
    }
}

/// `|δ_i|` from `γ_i λ_i^-A λ_{i+2}^-B`, avoiding the cancellation in `δ` itself.
fn delta_conjugates(emb: &[Interval; 3], roots: &RootTriple, a_exp: i64, b_exp: i64) -> Result<[Interval; 3]> {
    let mut out = Vec::with_capacity(3);
    for i in 0..3 {
        let pa = roots.lam(i).powi(-a_exp)?;
        let pb = roots.lam((i + 2) % 3).powi(-b_exp)?;
        out.push((&(&emb[i] * &pa) * &pb).abs());
    }
    Ok(out.try_into().expect("three conjugates"))
}

fn and3(v: impl IntoIterator<Item = Option<bool>>) -> Option<bool> {
    let mut undecided = false;
    for x in v {
        match x {
            Some(false) => return Some(false),
            None => undecided = true,
            Some(true) => {}
        }
    }
    (!undecided).then_some(true)
}

/// `m^(1/3)/sqrt(n+3) <= |δ_i| <= sqrt(n+3) m^(1/3)` for `i = 1, 2` and
/// `m^(1/3)/(n+3) <= |δ_0| <= (n+3) m^(1/3)`, compared after cubing.
fn conjugate_bounds(n: i64, m: &BigInt, d: &[Interval; 3]) -> Option<bool> {
    let k3 = Interval::from_int(BigInt::from(n + 3).pow(3));
    let mi = Interval::from_int(m.clone());
    let m2 = Interval::from_int(m * m);
    let c0 = d[0].pow(3);
    let mut checks = vec![mi.decide_le(&(&c0 * &k3)), c0.decide_le(&(&k3 * &mi))];
    for di in &d[1..] {
        let s = di.pow(6);
        checks.push(m2.decide_le(&(&s * &k3)));
        checks.push(s.decide_le(&(&k3 * &m2)));
    }
    and3(checks)
}

fn log_max1(x: &Interval) -> Result<Interval> {
    let one = Dyadic::from_int(1);
    let lo = x.lo().max(&one).clone();
    let hi = x.hi().max(&one).clone();
    if hi == one {
        return Ok(Interval::from_int(0));
    }
    Interval::new(lo, hi, x.prec()).ln()
}

fn candidate_offsets(radius: i64) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = (-radius..=radius).flat_map(|i| (-radius..=radius).map(move |j| (i, j))).collect();
    v.sort_by_key(|&(i, j)| (i.abs() + j.abs(), i.abs().max(j.abs()), i, j));
    v
}

/// Neighbour radius searched around the rounded regulator solution.
pub const NEIGHBOUR_RADIUS: i64 = 2;

/// Write `γ0 = δ λ0^A λ2^B` with `δ` of controlled size. `(A, B)` starts from
/// the rounded solution of the regulator system with targets
/// `log|γ_i| - (1/3) log m`; neighbours within [`NEIGHBOUR_RADIUS`] are tried
/// until the conjugate bounds hold (enforced for `n >= 3`). For `m = 1` the
/// remainder must be `±1`.
pub fn decompose(g: &GammaTriple) -> Result<UnitDecomposition> {
    let n = g.n;
    let l0 = OrderElement::lambda0(n);
    let l2 = OrderElement::lambda2(n);
    let l0_inv = l0.invert_unit()?;
    let l2_inv = l2.invert_unit()?;
    let unit_m = g.m.is_one();
    let asserted = n >= 3;
    let eighth = Dyadic::new(BigInt::one(), -3);

    let found = with_precision(START_PREC, "decomposing into units", |prec| {
        let roots = isolate_roots(n, prec)?;
        let sys = log_system(&roots)?;
        let emb = g.embeddings(&roots);
        let third_log_m = Interval::from_int(g.m.clone()).with_prec(prec).ln()?.div_int(&BigInt::from(3));
        let c0 = &interval_log_abs(&emb[0])? - &third_log_m;
        let c1 = &interval_log_abs(&emb[1])? - &third_log_m;
        let (a_real, b_real) = sys.solve(&c0, &c1)?;
        if a_real.width() > eighth || b_real.width() > eighth {
            return Ok(None);
        }
        let round = |iv: &Interval| -> i64 {
            let r = iv.mid().add_exact(&Dyadic::new(BigInt::one(), -1)).floor();
            i64::try_from(r).expect("unit exponent fits in i64")
        };
        let (a0, b0) = (round(&a_real), round(&b_real));
        let height_bound = &Interval::from_int(BigInt::from(n + 3)).with_prec(prec).ln()?.mul_int(&BigInt::from(2))
            .div_int(&BigInt::from(3))
            + &third_log_m;

        for (da, db) in candidate_offsets(NEIGHBOUR_RADIUS) {
            let (a_exp, b_exp) = (a0 + da, b0 + db);
            let delta = &(&g.gamma[0] * &unit_pow(&l0_inv, &l0, a_exp)) * &unit_pow(&l2_inv, &l2, b_exp);
            let delta_abs = if unit_m {
                if delta.as_integer().is_none_or(|v| !v.abs().is_one()) {
                    continue;
                }
                [Interval::from_int(1), Interval::from_int(1), Interval::from_int(1)]
            } else {
                delta_conjugates(&emb, &roots, a_exp, b_exp)?
            };
            let Some(bounds_hold) = conjugate_bounds(n, &g.m, &delta_abs) else { return Ok(None) };
            let mut height = Interval::from_int(0);
            for d in &delta_abs {
                height = &height + &log_max1(d)?;
            }
            let height = height.div_int(&BigInt::from(3));
            let Some(height_bound_holds) = height.decide_le(&height_bound) else { return Ok(None) };
            let dec = UnitDecomposition {
                n,
                a_exp,
                b_exp,
                delta,
                delta_abs,
                a_real: a_real.clone(),
                b_real: b_real.clone(),
                regulator: sys.regulator.clone(),
                c0: c0.clone(),
                c1: c1.clone(),
                bounds_asserted: asserted,
                bounds_hold,
                height,
                height_bound: height_bound.clone(),
                height_bound_holds,
            };
            if bounds_hold || (!asserted && !unit_m) {
                return Ok(Some(Ok(dec)));
            }
        }
        Ok(Some(Err(Error::DecompositionNotNormalized { best: format!("A={a0}, B={b0}") })))
    })??;

    let back = &(&found.delta * &unit_pow(&l0, &l0_inv, found.a_exp)) * &unit_pow(&l2, &l2_inv, found.b_exp);
    if back != g.gamma[0] {
        return Err(Error::Invariant(format!("decomposition does not multiply back to gamma0 at {:?}", (g.n, g.a))));
    }
    let norm = found.delta.norm();
    if norm.abs() != g.m {
        return Err(Error::Invariant(format!("norm of delta is {norm}, expected ±{}", g.m)));
    }
    Ok(found)
}

/// `γ_{i0}(L_{i1} - L_{i2}) + γ_{i1}(L_{i2} - L_{i0}) + γ_{i2}(L_{i0} - L_{i1})`
/// with `L_i = σ^i(λ0^a)`, computed exactly.
pub fn siegel_residual(g: &GammaTriple) -> OrderElement {
    let la = OrderElement::lambda0(g.n).pow(g.a as u32);
    let l = [la.clone(), la.galois(), la.galois_pow(2)];
    let (i0, i1, i2) = cyclic(g.i0);
    let term = |i: usize, j: usize, k: usize| &g.gamma[i] * &(&l[j] - &l[k]);
    &(&term(i0, i1, i2) + &term(i1, i2, i0)) + &term(i2, i0, i1)
}

pub fn siegel_check(g: &GammaTriple) -> bool {
    siegel_residual(g).is_zero()
}

#[derive(Clone, Debug, Serialize)]
pub struct SiegelReport {
    pub n: i64,
    pub a: i64,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub x: BigInt,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub y: BigInt,
    pub i0: usize,
    pub residual: OrderElement,
    pub zero: bool,
}

pub fn siegel_report(g: &GammaTriple) -> SiegelReport {
    let residual = siegel_residual(g);
    SiegelReport { n: g.n, a: g.a, x: g.x.clone(), y: g.y.clone(), i0: g.i0, zero: residual.is_zero(), residual }
}

/// Exponents `(A', B')` with `γ_{i1}/γ_{i2} = (δ_{i1}/δ_{i2}) λ0^A' λ2^B'`.
pub fn ab_prime(i0: usize, a: i64, b: i64) -> (i64, i64) {
    match i0 {
        0 => (-a + 2 * b, -2 * a + b),
        1 => (-a - b, a - 2 * b),
        2 => (2 * a - b, a + b),
        _ => panic!("i0 must be 0, 1 or 2, got {i0}"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaDiagnostics {
    pub n: i64,
    pub a: i64,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub x: BigInt,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub y: BigInt,
    pub i0: usize,
    pub a_exp: i64,
    pub b_exp: i64,
    pub a_prime: i64,
    pub b_prime: i64,
    /// `μ = (δ_{i1}/δ_{i2}) (λ_{i2}^a - λ_{i0}^a)/(λ_{i1}^a - λ_{i0}^a)`.
    pub mu: Interval,
    pub mu_conjugates: [Interval; 3],
    /// Primitive integer polynomial `c3 X^3 + c2 X^2 + c1 X + c0` with root `μ`,
    /// highest degree first.
    pub mu_poly: Vec<String>,
    /// `A' log λ0 + B' log|λ2| + log|μ|`.
    pub lambda: Interval,
    /// `|μ λ0^A' λ2^B' - 1|`, certified positive.
    pub distance_from_one: Interval,
    /// `γ_{i1}(λ_{i2}^a - λ_{i0}^a) / (γ_{i2}(λ_{i1}^a - λ_{i0}^a)) - 1`.
    pub ratio_minus_one: Interval,
    /// `2m / (y^3 λ0^a)`.
    pub rhs: Interval,
    pub rhs_holds: bool,
    /// `(1/3)(log c3 + Σ log max(1, |μ_j|))`.
    pub height_mu: Interval,
    /// `3 (log m + a log(n+3))`.
    pub height_mu_bound: Interval,
    pub height_mu_bound_holds: bool,
    pub prec: u32,
}

/// Exact primitive polynomial of `μ`, as `[c3, c2, c1, c0]`.
fn mu_polynomial(g: &GammaTriple, d: &UnitDecomposition) -> [BigInt; 4] {
    let la = OrderElement::lambda0(g.n).pow(g.a as u32);
    let l = [la.clone(), la.galois(), la.galois_pow(2)];
    let dl = [d.delta.clone(), d.delta.galois(), d.delta.galois_pow(2)];
    let (i0, i1, i2) = cyclic(g.i0);
    let p = &dl[i1] * &(&l[i2] - &l[i0]);
    let q = &dl[i2] * &(&l[i1] - &l[i0]);
    // μ = p / q = p σ(q) σ^2(q) / N(q)
    let den = q.norm();
    let z = &p * &(&q.galois() * &q.galois_pow(2));
    let (e1, e2, e3) = z.char_poly();
    let mut c = [&den * &den * &den, -(e1 * &den * &den), e2 * &den, -e3];
    let content = c.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let sign = if c[0].is_negative() { -BigInt::one() } else { BigInt::one() };
    for v in c.iter_mut() {
        *v = &*v / &content * &sign;
    }
    c
}

/// Certified `μ`, `Λ` and the Siegel-ratio comparison at `(x, y)`, `y != 0`.
pub fn lambda_diagnostics(g: &GammaTriple, d: &UnitDecomposition) -> Result<LambdaDiagnostics> {
    if g.y.is_zero() {
        return Err(Error::Precondition("lambda diagnostics need y != 0".into()));
    }
    let (i0, i1, i2) = cyclic(g.i0);
    let (a_prime, b_prime) = ab_prime(i0, d.a_exp, d.b_exp);
    let poly = mu_polynomial(g, d);
    let y3 = g.y.abs().pow(3);

    with_precision(START_PREC, "certifying the linear form in logarithms", |prec| {
        let roots = isolate_roots(g.n, prec)?;
        let sys = log_system(&roots)?;
        let pw = roots.powers(g.a);
        let emb = g.embeddings(&roots);
        let dc = if g.m.is_one() {
            let s = Interval::from_int(d.delta.as_integer().expect("unit delta").clone());
            [s.clone(), s.clone(), s]
        } else {
            // signed conjugates of δ
            let mut v = Vec::new();
            for i in 0..3 {
                let pa = roots.lam(i).powi(-d.a_exp)?;
                let pb = roots.lam((i + 2) % 3).powi(-d.b_exp)?;
                v.push(&(&emb[i] * &pa) * &pb);
            }
            v.try_into().expect("three conjugates")
        };
        let mu_at = |j: usize| -> Result<Interval> {
            let (k0, k1, k2) = ((i0 + j) % 3, (i1 + j) % 3, (i2 + j) % 3);
            dc[k1].div(&dc[k2])?.mul_ratio(&(&pw[k2] - &pw[k0]), &(&pw[k1] - &pw[k0]))
        };
        let mu_conjugates = [mu_at(0)?, mu_at(1)?, mu_at(2)?];
        let mu = mu_conjugates[0].clone();

        let [l0, _, l2] = &sys.logs;
        let log_mu = interval_log_abs(&mu)?;
        let lambda = &(&l0.mul_int(&BigInt::from(a_prime)) + &l2.mul_int(&BigInt::from(b_prime))) + &log_mu;
        let product = &(&mu * &roots.lam(0).powi(a_prime)?) * &roots.lam(2).powi(b_prime)?;
        let ratio = emb[i1].mul_ratio(&(&pw[i2] - &pw[i0]), &(&emb[i2] * &(&pw[i1] - &pw[i0])))?;
        let ratio_minus_one =
            (-&emb[i0]).mul_ratio(&(&pw[i1] - &pw[i2]), &(&emb[i2] * &(&pw[i1] - &pw[i0])))?;
        if !product.intersects(&ratio) || !(&ratio - &Interval::from_int(1)).intersects(&ratio_minus_one) {
            return Err(Error::Invariant(format!("Siegel ratio identities fail at {:?}", (g.n, g.a, &g.x, &g.y))));
        }
        let distance = (&product - &Interval::from_int(1)).abs();
        if distance.contains_zero() || ratio_minus_one.contains_zero() {
            return Ok(None);
        }
        if !lambda.intersects(&interval_log_abs(&product)?) {
            return Err(Error::Invariant("Λ differs from log|μ λ0^A' λ2^B'|".into()));
        }
        let rhs = Interval::from_int(2 * &g.m).div(&pw[0].mul_int(&y3))?;
        let Some(rhs_holds) = ratio_minus_one.abs().decide_le(&rhs) else { return Ok(None) };

        let mut height_mu = Interval::from_int(poly[0].abs()).with_prec(prec).ln()?;
        for mj in &mu_conjugates {
            height_mu = &height_mu + &log_max1(&mj.abs())?;
        }
        let height_mu = height_mu.div_int(&BigInt::from(3));
        let log_m = Interval::from_int(g.m.clone()).with_prec(prec).ln()?;
        let log_k = Interval::from_int(BigInt::from(g.n + 3)).with_prec(prec).ln()?;
        let height_mu_bound = (&log_m + &log_k.mul_int(&BigInt::from(g.a))).mul_int(&BigInt::from(3));
        let Some(height_mu_bound_holds) = height_mu.decide_le(&height_mu_bound) else { return Ok(None) };

        Ok(Some(LambdaDiagnostics {
            n: g.n,
            a: g.a,
            x: g.x.clone(),
            y: g.y.clone(),
            i0,
            a_exp: d.a_exp,
            b_exp: d.b_exp,
            a_prime,
            b_prime,
            mu,
            mu_conjugates,
            mu_poly: poly.iter().map(|c| c.to_string()).collect(),
            lambda,
            distance_from_one: distance,
            ratio_minus_one,
            rhs,
            rhs_holds,
            height_mu,
            height_mu_bound,
            height_mu_bound_holds,
            prec,
        }))
    })
}

trait MulRatio {
    fn mul_ratio(&self, num: &Interval, den: &Interval) -> Result<Interval>;
}

impl MulRatio for Interval {
    fn mul_ratio(&self, num: &Interval, den: &Interval) -> Result<Interval> {
        (self * num).div(den)
    }
}
