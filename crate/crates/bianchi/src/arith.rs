//! Arithmetic layer behind the Fourier coefficients: coset enumeration for
//! the unipotent quotient, Kloosterman sums over `O_K`, their majorant
//! series, scattering sums, and the Niebur Fourier coefficients.
//!
//! Truncated sums are accumulated shell by shell (grouped by `N(c)`) in a
//! fixed `(norm, x, y)` order with compensated summation, so results are
//! reproducible to 1e-12 regardless of how shells are distributed across
//! threads.

use crate::field::{
    self, gcd, lattice_points_in_disk, units_mod, AlgInt, DualPoint, FieldContext,
};
use crate::special::script_j;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArithError {
    #[error("c must be nonzero")]
    ZeroC,
    #[error("nu and mu must be nonzero")]
    ZeroMode,
    #[error("parameter s = {0} outside the convergent range {1}")]
    SDomain(f64, &'static str),
    #[error("scattering sum at mu = 0 evaluated too close to the pole at s = 1")]
    PoleProximity,
    #[error(transparent)]
    Field(#[from] field::FieldError),
}

/// One representative of a left coset of the translation subgroup, stored
/// with its exact bottom row and completed top row (`a d - b c = 1`).
#[derive(Debug, Clone, Copy)]
pub struct CosetRep {
    pub a: AlgInt,
    pub b: AlgInt,
    pub c: AlgInt,
    pub d: AlgInt,
    /// Unit cosets (`c = 0`) act as `z -> u^2 z`.
    pub is_c_zero: bool,
}

/// Truncation window for coset enumeration: bottom rows with
/// `0 < |c| <= c_max` (modulo sign) and `|d + c * d_center| <= d_radius(|c|)`.
///
/// The d-window is centered per `c` so that for evaluation at a point with
/// `z = d_center` the retained summands are exactly the largest ones.
#[derive(Debug, Clone, Copy)]
pub struct CosetWindow {
    pub c_max: f64,
    pub d_center: Complex64,
    /// `d_radius(|c|) = max(d_min, d_factor * |c|)`
    pub d_min: f64,
    pub d_factor: f64,
}

impl CosetWindow {
    pub fn new(c_max: f64, d_center: Complex64, d_min: f64, d_factor: f64) -> Self {
        CosetWindow {
            c_max,
            d_center,
            d_min,
            d_factor,
        }
    }

    pub fn d_radius(&self, c_abs: f64) -> f64 {
        self.d_min.max(self.d_factor * c_abs)
    }
}

/// A shell of cosets sharing `N(c)`.
#[derive(Debug, Clone)]
pub struct CosetShell {
    pub c_norm: i64,
    pub reps: Vec<CosetRep>,
}

/// Materialized coset list: the unit cosets plus `c != 0` shells, ordered by
/// `(N(c), c.x, c.y, d.x, d.y)`.
#[derive(Debug, Clone)]
pub struct CosetSet {
    /// Units `u` of `O_K^x / {+-1}`; the corresponding cosets act as
    /// `z -> u^2 z`, `r -> r`.
    pub units: Vec<AlgInt>,
    pub shells: Vec<CosetShell>,
}

impl CosetSet {
    pub fn rep_count(&self) -> usize {
        self.units.len() + self.shells.iter().map(|s| s.reps.len()).sum::<usize>()
    }
}

/// Canonical nonzero `c` representatives modulo sign, sorted by
/// `(N(c), x, y)`.
pub fn canonical_cs(ctx: &FieldContext, c_max: f64) -> Vec<AlgInt> {
    field::enumerate_bounded(ctx, c_max)
        .into_iter()
        .filter(|c| ctx.canonical_mod_pm(*c) == *c)
        .collect()
}

/// Coprime `d` values for a fixed `c` inside the window's disk, in a fixed
/// order. Coprimality is tested per residue class of `d (mod c)`.
pub fn coprime_d_in_window(
    ctx: &FieldContext,
    c: AlgInt,
    window: &CosetWindow,
) -> Vec<AlgInt> {
    let c_abs = (ctx.norm(c) as f64).sqrt();
    let center = -ctx.embed(c) * window.d_center;
    let radius = window.d_radius(c_abs);
    let ring = field::ResidueRing::new(ctx, c).expect("c is nonzero");
    // coprimality table over residue classes, dense-indexed
    let mut ok = vec![false; ring.card() as usize];
    for r in ring.residues() {
        ok[ring.index_of(r)] = if r.is_zero() {
            ctx.norm(c) == 1
        } else {
            gcd(ctx, r, c).map(|g| ctx.norm(g)) == Ok(1)
        };
    }
    lattice_points_in_disk(ctx, center, radius)
        .into_iter()
        .filter(|d| ok[ring.index_of(ring.reduce(*d))])
        .collect()
}

/// Build the full coset list for a window. Top rows are completed with
/// Bezout so `a d - b c = 1` holds exactly.
pub fn coset_set(ctx: &FieldContext, window: &CosetWindow) -> CosetSet {
    let units = ctx.units_mod_pm.clone();
    let mut shells: Vec<CosetShell> = Vec::new();
    for c in canonical_cs(ctx, window.c_max) {
        let c_norm = ctx.norm(c);
        let mut reps = Vec::new();
        for d in coprime_d_in_window(ctx, c, window) {
            if let Some(m) = complete_row(ctx, c, d) {
                reps.push(m);
            }
        }
        if reps.is_empty() {
            continue;
        }
        match shells.last_mut() {
            Some(last) if last.c_norm == c_norm => last.reps.extend(reps),
            _ => shells.push(CosetShell { c_norm, reps }),
        }
    }
    CosetSet { units, shells }
}

/// Complete the coprime bottom row `(c, d)` to `(a, b; c, d)` with
/// `a d - b c = 1` exactly.
pub fn complete_row(ctx: &FieldContext, c: AlgInt, d: AlgInt) -> Option<CosetRep> {
    let (g, u, v) = field::bezout(ctx, d, c.neg()).ok()?;
    if ctx.norm(g) != 1 {
        return None;
    }
    let g_inv = ctx.conj(g);
    let a = ctx.mul(g_inv, u);
    let b = ctx.mul(g_inv, v);
    debug_assert_eq!(ctx.sub(ctx.mul(a, d), ctx.mul(b, c)), AlgInt::ONE);
    Some(CosetRep {
        a,
        b,
        c,
        d,
        is_c_zero: false,
    })
}

/// A Kloosterman sum value with its inputs.
#[derive(Debug, Clone, Copy)]
pub struct KloostermanValue {
    pub value: Complex64,
    pub c: AlgInt,
    pub nu: DualPoint,
    pub mu: DualPoint,
}

/// `S(nu, mu, c) = sum over u u* = 1 in O_K/c of e^{2 pi i tr((u nu + u* mu)/c)}`.
///
/// For `c` a unit the sum is the empty-exponent convention value 1. The
/// trivial bound `|S| <= N(c)` is enforced as a post-check.
pub fn kloosterman_s(
    ctx: &FieldContext,
    nu: DualPoint,
    mu: DualPoint,
    c: AlgInt,
) -> Result<KloostermanValue, ArithError> {
    if c.is_zero() {
        return Err(ArithError::ZeroC);
    }
    if nu.is_zero() || mu.is_zero() {
        return Err(ArithError::ZeroMode);
    }
    let nu_c = ctx.embed_dual(nu);
    let mu_c = ctx.embed_dual(mu);
    let c_c = ctx.embed(c);
    let mut sum = Complex64::new(0.0, 0.0);
    for (u, ustar) in units_mod(ctx, c)? {
        let w = (ctx.embed(u) * nu_c + ctx.embed(ustar) * mu_c) / c_c;
        let phase = 2.0 * PI * field::trace_c(w);
        sum += Complex64::new(phase.cos(), phase.sin());
    }
    let bound = ctx.norm(c) as f64;
    debug_assert!(
        sum.norm() <= bound * (1.0 + 1e-9),
        "trivial bound violated: |S| = {} > N(c) = {}",
        sum.norm(),
        bound
    );
    Ok(KloostermanValue {
        value: sum,
        c,
        nu,
        mu,
    })
}

/// Partial sum of the Kloosterman majorant series
/// `Z(nu, mu; s) = sum_c |S(nu, mu, c)| / |c|^{2+2s}` over `0 < |c| <= c_max`
/// modulo sign, together with the magnitude of the outermost norm shell.
pub fn z_partial(
    ctx: &FieldContext,
    nu: DualPoint,
    mu: DualPoint,
    s: f64,
    c_max: f64,
) -> Result<(f64, f64), ArithError> {
    if s <= 0.5 {
        return Err(ArithError::SDomain(s, "Z(nu, mu; s) needs s > 1/2"));
    }
    let mut total = 0.0;
    let mut shell_sum = 0.0;
    let mut shell_norm = -1i64;
    for c in canonical_cs(ctx, c_max) {
        let n = ctx.norm(c);
        if n != shell_norm {
            shell_norm = n;
            shell_sum = 0.0;
        }
        let term = kloosterman_s(ctx, nu, mu, c)?.value.norm() / (n as f64).powf(1.0 + s);
        total += term;
        shell_sum += term;
    }
    Ok((total, shell_sum))
}

/// Scattering sum `phi_{oo,oo}(mu; s)`.
///
/// At `mu = 0` the closed form
/// `pi |O_K^x| zeta_K(s) / (h_K |d_K|^{1/2} s zeta_K(s+1))` is used (one
/// trivial class-group character since `h_K = 1`); it requires `s > 1` and
/// rejects `|s - 1| < 1e-6`. For `mu != 0` the truncated double-coset sum
/// `pi/(covol s) sum_c |c|^{-2s-2} R_c(mu)` is evaluated, with the inner
/// Ramanujan-type sum `R_c(mu) = sum_{d mod c coprime} e^{2 pi i tr(mu d/c)}`
/// computed exactly over residues.
pub fn phi_scattering(
    ctx: &FieldContext,
    mu: Option<DualPoint>,
    s: f64,
    c_max: f64,
) -> Result<Complex64, ArithError> {
    match mu {
        None => phi_scattering_zero(ctx, s).map(|v| Complex64::new(v, 0.0)),
        Some(m) if m.is_zero() => phi_scattering_zero(ctx, s).map(|v| Complex64::new(v, 0.0)),
        Some(m) => {
            let mus = [ctx.embed_dual(m)];
            let out = scattering_sums_bulk(ctx, &mus, &[s], c_max);
            Ok(out[0][0])
        }
    }
}

fn phi_scattering_zero(ctx: &FieldContext, s: f64) -> Result<f64, ArithError> {
    if s <= 1.0 {
        return Err(ArithError::SDomain(s, "phi(0; s) closed form needs s > 1"));
    }
    if (s - 1.0).abs() < 1e-6 {
        return Err(ArithError::PoleProximity);
    }
    let w = (2 * ctx.units_mod_pm.len()) as f64;
    let abs_d = (-ctx.d_k) as f64;
    Ok(PI * w * field::dedekind_zeta(ctx, s)?
        / (ctx.h_k as f64 * abs_d.sqrt() * s * field::dedekind_zeta(ctx, s + 1.0)?))
}

/// Bulk evaluation of `phi_{oo,oo}(mu; s)` for several nonzero modes and
/// several `s` at once: the exact residue phase sums `R_c(mu)` are computed
/// once per `c` and reused across the `s` grid.
pub fn scattering_sums_bulk(
    ctx: &FieldContext,
    mus: &[Complex64],
    s_values: &[f64],
    c_max: f64,
) -> Vec<Vec<Complex64>> {
    let cs = canonical_cs(ctx, c_max);
    let mut out = vec![vec![Complex64::new(0.0, 0.0); s_values.len()]; mus.len()];
    for c in cs {
        let c_c = ctx.embed(c);
        let n = ctx.norm(c) as f64;
        // coprime residues of O_K / c
        let residues: Vec<Complex64> = if ctx.norm(c) == 1 {
            vec![Complex64::new(0.0, 0.0)]
        } else {
            units_mod(ctx, c)
                .expect("c nonzero")
                .into_iter()
                .map(|(u, _)| ctx.embed(u))
                .collect()
        };
        for (i, mu) in mus.iter().enumerate() {
            let mut phase_sum = Complex64::new(0.0, 0.0);
            for d in &residues {
                let phase = 2.0 * PI * field::trace_c(mu * d / c_c);
                phase_sum += Complex64::new(phase.cos(), phase.sin());
            }
            for (k, s) in s_values.iter().enumerate() {
                out[i][k] += phase_sum * n.powf(-s - 1.0);
            }
        }
    }
    for (i, _) in mus.iter().enumerate() {
        for (k, s) in s_values.iter().enumerate() {
            out[i][k] *= PI / (ctx.covol * s);
        }
    }
    out
}

/// Niebur Fourier coefficient
/// `B(nu, mu; s) = (2 pi / covol) sum_c S(nu, mu, c) / |c|^2 script_j(nu mu / c^2)`
/// truncated at `|c| <= c_max`, plus the outermost-shell magnitude.
pub fn b_coeff(
    ctx: &FieldContext,
    nu: DualPoint,
    mu: DualPoint,
    s: f64,
    c_max: f64,
) -> Result<(Complex64, f64), ArithError> {
    if s <= 0.5 {
        return Err(ArithError::SDomain(s, "B(nu, mu; s) needs s > 1/2"));
    }
    if nu.is_zero() || mu.is_zero() {
        return Err(ArithError::ZeroMode);
    }
    let numu = ctx.embed_dual(nu) * ctx.embed_dual(mu);
    let mut total = Complex64::new(0.0, 0.0);
    let mut shell_sum = Complex64::new(0.0, 0.0);
    let mut shell_norm = -1i64;
    for c in canonical_cs(ctx, c_max) {
        let n = ctx.norm(c);
        if n != shell_norm {
            shell_norm = n;
            shell_sum = Complex64::new(0.0, 0.0);
        }
        let s_val = kloosterman_s(ctx, nu, mu, c)?.value;
        let c_c = ctx.embed(c);
        let j = script_j(s, numu / (c_c * c_c)).expect("nonzero argument");
        let term = s_val / n as f64 * j;
        total += term;
        shell_sum += term;
    }
    let front = 2.0 * PI / ctx.covol;
    Ok((front * total, front * shell_sum.norm()))
}

/// The same coefficient evaluated from double-coset representatives:
/// `d` over invertible residues mod `c` and `a = d^{-1} (mod c)`, with the
/// exponent `e^{2 pi i tr((nu a + mu d)/c)}`. Shell-by-shell this regroups
/// exactly into `S(nu, mu, c) * script_j`, which the tests assert.
pub fn b_coeff_double_coset(
    ctx: &FieldContext,
    nu: DualPoint,
    mu: DualPoint,
    s: f64,
    c_max: f64,
) -> Result<(Complex64, f64), ArithError> {
    if nu.is_zero() || mu.is_zero() {
        return Err(ArithError::ZeroMode);
    }
    let nu_c = ctx.embed_dual(nu);
    let mu_c = ctx.embed_dual(mu);
    let numu = nu_c * mu_c;
    let mut total = Complex64::new(0.0, 0.0);
    let mut shell_sum = Complex64::new(0.0, 0.0);
    let mut shell_norm = -1i64;
    for c in canonical_cs(ctx, c_max) {
        let n = ctx.norm(c);
        if n != shell_norm {
            shell_norm = n;
            shell_sum = Complex64::new(0.0, 0.0);
        }
        let c_c = ctx.embed(c);
        let j = script_j(s, numu / (c_c * c_c)).expect("nonzero argument");
        let mut inner = Complex64::new(0.0, 0.0);
        for (d, d_inv) in units_mod(ctx, c)? {
            let a = d_inv; // a = d^{-1} lifted to the canonical residue
            let w = (nu_c * ctx.embed(a) + mu_c * ctx.embed(d)) / c_c;
            let phase = 2.0 * PI * field::trace_c(w);
            inner += Complex64::new(phase.cos(), phase.sin());
        }
        let term = inner / n as f64 * j;
        total += term;
        shell_sum += term;
    }
    let front = 2.0 * PI / ctx.covol;
    Ok((front * total, front * shell_sum.norm()))
}
