//! The upper half-space model of hyperbolic 3-space: points, the PSL2(C)
//! action, hyperbolic distance and measure, and fundamental-domain machinery
//! for PSL2(Z[i]).

use crate::field::{AlgInt, FieldContext};
use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("fundamental domain is implemented only for d_K = -4, got {0}")]
    UnsupportedDomain(i64),
    #[error("reduction did not converge in {0} steps")]
    ReductionDiverged(usize),
    #[error("invalid r range: ({0}, {1})")]
    InvalidRange(f64, f64),
}

/// A point `P = z + r j` of `H^3` with `r > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub z: Complex64,
    pub r: f64,
}

impl Point {
    pub fn new(z: Complex64, r: f64) -> Self {
        debug_assert!(r > 0.0);
        Point { z, r }
    }

    pub fn from_coords(x: f64, y: f64, r: f64) -> Self {
        Point::new(Complex64::new(x, y), r)
    }

    /// Quaternionic norm `||P|| = sqrt(|z|^2 + r^2)`.
    pub fn qnorm(&self) -> f64 {
        (self.z.norm_sqr() + self.r * self.r).sqrt()
    }
}

/// An element of PSL2(C), stored as a sign-canonicalized matrix with
/// determinant 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Motion {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Motion {
    /// Build from complex entries; the determinant must be 1 to 1e-12.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        let det = a * d - b * c;
        debug_assert!(
            (det - Complex64::new(1.0, 0.0)).norm() < 1e-12,
            "motion must have determinant 1, got {det}"
        );
        Motion { a, b, c, d }.canonicalize()
    }

    pub fn identity() -> Self {
        Motion {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// Exact construction from `O_K` entries with `ad - bc = 1`.
    pub fn from_algint(ctx: &FieldContext, a: AlgInt, b: AlgInt, c: AlgInt, d: AlgInt) -> Self {
        debug_assert_eq!(
            ctx.sub(ctx.mul(a, d), ctx.mul(b, c)),
            AlgInt::ONE,
            "entries must satisfy ad - bc = 1 exactly"
        );
        Motion::new(ctx.embed(a), ctx.embed(b), ctx.embed(c), ctx.embed(d))
    }

    /// Translation `P -> P + lambda`.
    pub fn translation(lambda: Complex64) -> Self {
        Motion::new(
            Complex64::new(1.0, 0.0),
            lambda,
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    /// The inversion `(0, -1; 1, 0)`.
    pub fn inversion() -> Self {
        Motion::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
    }

    /// PSL2 sign canonicalization: the first entry of `(a, b, c, d)` with
    /// modulus above 1e-12 gets argument in `(-pi/2, pi/2]`.
    fn canonicalize(self) -> Self {
        for w in [self.a, self.b, self.c, self.d] {
            if w.norm() > 1e-12 {
                let keep = w.re > 1e-12 || (w.re.abs() <= 1e-12 && w.im > 0.0);
                return if keep { self } else { self.neg_entries() };
            }
        }
        self
    }

    fn neg_entries(self) -> Self {
        Motion {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    pub fn compose(&self, other: &Motion) -> Motion {
        Motion::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    pub fn inverse(&self) -> Motion {
        Motion::new(self.d, -self.b, -self.c, self.a)
    }
}

/// The PSL2(C) action on `H^3`.
pub fn apply(g: &Motion, p: Point) -> Point {
    let w = g.c * p.z + g.d;
    let denom = w.norm_sqr() + g.c.norm_sqr() * p.r * p.r;
    let z = ((g.a * p.z + g.b) * w.conj() + g.a * g.c.conj() * p.r * p.r) / denom;
    Point::new(z, p.r / denom)
}

/// `cosh` of the hyperbolic distance between two points.
pub fn cosh_dist(p: Point, q: Point) -> f64 {
    ((p.z - q.z).norm_sqr() + p.r * p.r + q.r * q.r) / (2.0 * p.r * q.r)
}

/// Hyperbolic distance.
pub fn dist(p: Point, q: Point) -> f64 {
    let t = cosh_dist(p, q).max(1.0);
    t.acosh()
}

/// Hyperbolic volume of `X = PSL2(O_K) \ H^3`, namely
/// `|d_K|^{3/2} zeta_K(2) / (4 pi^2)`.
pub fn volume(ctx: &FieldContext) -> f64 {
    let abs_d = (-ctx.d_k) as f64;
    abs_d.powf(1.5) * crate::field::dedekind_zeta(ctx, 2.0).unwrap()
        / (4.0 * std::f64::consts::PI * std::f64::consts::PI)
}

/// Closed fundamental domain for PSL2(Z[i]):
/// `|Re z| <= 1/2, 0 <= Im z <= 1/2, |z|^2 + r^2 >= 1`.
pub fn in_fundamental_domain(p: Point, eps: f64) -> bool {
    p.z.re.abs() <= 0.5 + eps
        && p.z.im >= -eps
        && p.z.im <= 0.5 + eps
        && p.z.norm_sqr() + p.r * p.r >= 1.0 - eps
}

/// Reduce `P` into the fundamental domain for d_K = -4.
///
/// Returns the reduced point and a motion `g` with `apply(g, P)` equal to it.
/// The loop translates into the unit cell, folds by the unit `i` to reach
/// `Im z >= 0`, and inverts while `||P|| < 1`; `r` strictly increases on each
/// inversion, which forces termination.
pub fn reduce(ctx: &FieldContext, p: Point) -> Result<(Point, Motion), GeomError> {
    if ctx.d_k != -4 {
        return Err(GeomError::UnsupportedDomain(ctx.d_k));
    }
    let mut cur = p;
    let mut g = Motion::identity();
    for _ in 0..10_000 {
        // translate z into [-1/2, 1/2)^2
        let shift = Complex64::new(cur.z.re.round(), cur.z.im.round());
        if shift.norm() > 0.0 {
            let t = Motion::translation(-shift);
            cur = apply(&t, cur);
            g = t.compose(&g);
        }
        // fold by diag(i, -i): z -> -z, reaching Im z >= 0
        if cur.z.im < 0.0 {
            let u = Motion::new(
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
            );
            cur = apply(&u, cur);
            g = u.compose(&g);
            continue;
        }
        if cur.qnorm() < 1.0 - 1e-13 {
            let s = Motion::inversion();
            cur = apply(&s, cur);
            g = s.compose(&g);
            continue;
        }
        if in_fundamental_domain(cur, 1e-12) {
            return Ok((cur, g));
        }
    }
    Err(GeomError::ReductionDiverged(10_000))
}

/// Draw one point of the fundamental domain with density proportional to
/// `dmu = dx dy dr / r^3` restricted to `F` intersected with `r_min <= r <= r_max`.
///
/// The `r` marginal is sampled by inverse CDF, `z` uniformly on the cell
/// `[-1/2, 1/2] x [0, 1/2]`, and draws with `|z|^2 + r^2 < 1` are rejected.
pub fn sample_fundamental<R: Rng>(
    ctx: &FieldContext,
    rng: &mut R,
    r_min: f64,
    r_max: f64,
) -> Result<Point, GeomError> {
    if ctx.d_k != -4 {
        return Err(GeomError::UnsupportedDomain(ctx.d_k));
    }
    if !(0.0 < r_min && r_min < r_max) {
        return Err(GeomError::InvalidRange(r_min, r_max));
    }
    let a = r_min.powi(-2);
    let b = r_max.powi(-2);
    loop {
        let u: f64 = rng.gen();
        let r = (a - u * (a - b)).powf(-0.5);
        let x: f64 = rng.gen_range(-0.5..0.5);
        let y: f64 = rng.gen_range(0.0..0.5);
        let p = Point::from_coords(x, y, r);
        if p.qnorm() >= 1.0 {
            return Ok(p);
        }
    }
}

/// Euclidean-measure constant of the sampling box: the measure
/// `integral of r^-3 dx dy dr` over the cell times `[r_min, r_max]`,
/// before the `||P|| >= 1` rejection.
pub fn sampling_box_measure(r_min: f64, r_max: f64) -> f64 {
    0.5 * (r_min.powi(-2) - r_max.powi(-2)) / 2.0
}

/// Order of the stabilizer of `P` in PSL2(O_K), counted by enumerating
/// motions with bottom-row radius up to `search_radius` composed with the
/// lattice translation that brings `gP` back near `P`.
pub fn stabilizer_order(ctx: &FieldContext, p: Point, search_radius: f64) -> usize {
    let mut count = 0usize;
    let cands = bottom_rows(ctx, search_radius, p);
    for (c, d) in cands {
        let gamma = match complete_motion(ctx, c, d) {
            Some(g) => g,
            None => continue,
        };
        let image = apply(&gamma, p);
        // search the few translations that can bring the image back to P
        let delta = p.z - image.z;
        let base = Complex64::new(delta.re.round(), delta.im.round());
        for dx in -1..=1 {
            for dy in -1..=1 {
                let lam = base + Complex64::new(dx as f64, dy as f64);
                let moved = Point::new(image.z + lam, image.r);
                if cosh_dist(moved, p) < 1.0 + 1e-9 {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Complete a coprime bottom row `(c, d)` to a motion in PSL2(O_K).
pub fn complete_motion(ctx: &FieldContext, c: AlgInt, d: AlgInt) -> Option<Motion> {
    let (g, u, v) = crate::field::bezout(ctx, d, c.neg()).ok()?;
    if ctx.norm(g) != 1 {
        return None;
    }
    // u*d + v*(-c) = g (unit); scale by g^{-1} to make a*d - b*c = 1
    let g_inv = ctx.conj(g);
    let a = ctx.mul(g_inv, u);
    let b = ctx.mul(g_inv, v);
    Some(Motion::from_algint(ctx, a, b, c, d))
}

/// Coprime bottom rows `(c, d)` with `0 < |c| <= radius` (plus the unit rows
/// with c = 0), `d` within a window adapted to `P`, modulo `{+-1}`.
fn bottom_rows(ctx: &FieldContext, radius: f64, p: Point) -> Vec<(AlgInt, AlgInt)> {
    let mut rows = Vec::new();
    for u in &ctx.units_mod_pm {
        rows.push((AlgInt::ZERO, ctx.conj(*u)));
    }
    let d_window = radius * (p.z.norm() + p.r + 1.0) + 2.0;
    for c in crate::field::enumerate_bounded(ctx, radius) {
        if ctx.canonical_mod_pm(c) != c {
            continue;
        }
        let center = -ctx.embed(c) * p.z;
        for d in crate::field::enumerate_bounded(ctx, d_window + center.norm()) {
            if (ctx.embed(d) - center).norm() > d_window {
                continue;
            }
            if crate::field::gcd(ctx, c, d).map(|g| ctx.norm(g)) == Ok(1) {
                rows.push((c, d));
            }
        }
        // d = 0 row when c is a unit
        if ctx.norm(c) == 1 {
            rows.push((c, AlgInt::ZERO));
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const CATALAN: f64 = 0.915_965_594_177_219_0;

    fn random_point(rng: &mut StdRng) -> Point {
        Point::from_coords(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(0.2..4.0),
        )
    }

    fn random_motion(ctx: &FieldContext, rng: &mut StdRng) -> Motion {
        // random product of translations, inversion, and unit folds
        let mut g = Motion::identity();
        for _ in 0..6 {
            match rng.gen_range(0..3) {
                0 => {
                    let lam = ctx.embed(AlgInt::new(rng.gen_range(-3..4), rng.gen_range(-3..4)));
                    g = Motion::translation(lam).compose(&g);
                }
                1 => g = Motion::inversion().compose(&g),
                _ => {
                    let u = ctx.units_mod_pm[rng.gen_range(0..ctx.units_mod_pm.len())];
                    let ue = ctx.embed(u);
                    g = Motion::new(
                        ue,
                        Complex64::new(0.0, 0.0),
                        Complex64::new(0.0, 0.0),
                        ue.inv(),
                    )
                    .compose(&g);
                }
            }
        }
        g
    }

    #[test]
    fn apply_examples() {
        let p = Point::from_coords(0.3, -0.2, 1.7);
        let id = Motion::identity();
        let q = apply(&id, p);
        assert_relative_eq!(q.r, p.r);
        assert_relative_eq!((q.z - p.z).norm(), 0.0, epsilon = 1e-15);

        // j is fixed by the inversion
        let j = Point::from_coords(0.0, 0.0, 1.0);
        let s = apply(&Motion::inversion(), j);
        assert_relative_eq!(s.r, 1.0, epsilon = 1e-15);
        assert_relative_eq!(s.z.norm(), 0.0, epsilon = 1e-15);

        // translations shift z and keep r
        let lam = Complex64::new(2.0, -1.0);
        let t = apply(&Motion::translation(lam), p);
        assert_relative_eq!(t.r, p.r);
        assert_relative_eq!((t.z - p.z - lam).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn cosh_dist_examples() {
        let p = Point::from_coords(0.1, 0.9, 0.6);
        assert_relative_eq!(cosh_dist(p, p), 1.0);
        let j = Point::from_coords(0.0, 0.0, 1.0);
        let j2 = Point::from_coords(0.0, 0.0, 2.0);
        assert_relative_eq!(cosh_dist(j, j2), 1.25);
    }

    #[test]
    fn action_is_a_group_action() {
        let ctx = make_field(-4).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..1000 {
            let g1 = random_motion(&ctx, &mut rng);
            let g2 = random_motion(&ctx, &mut rng);
            let p = random_point(&mut rng);
            let lhs = apply(&g1.compose(&g2), p);
            let rhs = apply(&g1, apply(&g2, p));
            assert_relative_eq!(lhs.r, rhs.r, max_relative = 1e-12);
            assert_relative_eq!((lhs.z - rhs.z).norm(), 0.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn isometry_invariance() {
        let ctx = make_field(-4).unwrap();
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..100 {
            let g = random_motion(&ctx, &mut rng);
            let p = random_point(&mut rng);
            let q = random_point(&mut rng);
            let before = cosh_dist(p, q);
            let after = cosh_dist(apply(&g, p), apply(&g, q));
            assert_relative_eq!(before, after, max_relative = 1e-10);
        }
    }

    #[test]
    fn motion_sign_quotient() {
        // g and -g canonicalize to the same matrix
        let g = Motion::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        );
        let h = Motion::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
        );
        assert_eq!(g, h);
    }

    #[test]
    fn volume_examples() {
        let ctx = make_field(-4).unwrap();
        assert_relative_eq!(volume(&ctx), CATALAN / 3.0, max_relative = 1e-12);
        for d in crate::field::SUPPORTED_DISCRIMINANTS {
            assert!(volume(&make_field(d).unwrap()) > 0.0);
        }
    }

    #[test]
    fn reduce_examples() {
        let ctx = make_field(-4).unwrap();

        // already interior
        let p = Point::from_coords(0.1, 0.2, 2.0);
        let (q, g) = reduce(&ctx, p).unwrap();
        assert_eq!(g, Motion::identity());
        assert_relative_eq!((q.z - p.z).norm(), 0.0, epsilon = 1e-14);

        // j/2 translated by 3 + 4i: translation removed, then inversion
        let p = Point::from_coords(3.0, 4.0, 0.5);
        let (q, g) = reduce(&ctx, p).unwrap();
        assert_relative_eq!(q.r, 2.0, max_relative = 1e-12);
        let moved = apply(&g, p);
        assert!(cosh_dist(moved, q) < 1.0 + 1e-10);

        // self-consistency and idempotence on random points
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..200 {
            let p = random_point(&mut rng);
            let (q, g) = reduce(&ctx, p).unwrap();
            assert!(in_fundamental_domain(q, 1e-9));
            assert!(cosh_dist(apply(&g, p), q) < 1.0 + 1e-10);
            let (q2, _) = reduce(&ctx, q).unwrap();
            assert!(cosh_dist(q, q2) < 1.0 + 1e-10);
        }

        assert!(reduce(&make_field(-3).unwrap(), p).is_err());
    }

    #[test]
    fn reduced_points_maximize_r_over_small_rows() {
        // for reduced Q the orbit height r(gQ) never exceeds r(Q); spot-check
        // against all small bottom rows
        let ctx = make_field(-4).unwrap();
        let mut rng = StdRng::seed_from_u64(10);
        for _ in 0..50 {
            let (q, _) = reduce(&ctx, random_point(&mut rng)).unwrap();
            for (c, d) in bottom_rows(&ctx, 3.0, q) {
                if c.is_zero() {
                    continue;
                }
                let denom = (ctx.embed(c) * q.z + ctx.embed(d)).norm_sqr()
                    + ctx.norm(c) as f64 * q.r * q.r;
                assert!(
                    denom >= 1.0 - 1e-9,
                    "row ({c:?},{d:?}) lowers a reduced point"
                );
            }
        }
    }

    #[test]
    fn sampling_r_marginal_mean() {
        let ctx = make_field(-4).unwrap();
        let mut rng = StdRng::seed_from_u64(14);
        let (r_min, r_max) = (1.0, 4.0);
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            sum += sample_fundamental(&ctx, &mut rng, r_min, r_max).unwrap().r;
        }
        let mean = sum / n as f64;
        // analytic mean of the truncated r^-3 marginal
        let expect = (1.0 / r_min - 1.0 / r_max) / ((r_min.powi(-2) - r_max.powi(-2)) / 2.0);
        let se = 0.7 / (n as f64).sqrt();
        assert!(
            (mean - expect).abs() < 3.0 * se,
            "mean {mean} vs {expect} (se {se})"
        );
    }

    #[test]
    fn sampling_measure_matches_grid_quadrature() {
        // measure of F with 0.8 <= r <= 4 by MC versus a deterministic grid
        let (r_min, r_max) = (0.8f64, 4.0f64);
        let mut rng = StdRng::seed_from_u64(15);
        let n = 200_000;
        let mut accepted = 0usize;
        for _ in 0..n {
            let a = r_min.powi(-2);
            let b = r_max.powi(-2);
            let u: f64 = rng.gen();
            let r = (a - u * (a - b)).powf(-0.5);
            let x: f64 = rng.gen_range(-0.5..0.5);
            let y: f64 = rng.gen_range(0.0..0.5);
            if x * x + y * y + r * r >= 1.0 {
                accepted += 1;
            }
        }
        let mc = sampling_box_measure(r_min, r_max) * accepted as f64 / n as f64;
        // grid quadrature of dmu over the same region
        let m = 400usize;
        let mut grid = 0.0;
        for i in 0..m {
            let x = -0.5 + (i as f64 + 0.5) / m as f64;
            for j in 0..m / 2 {
                let y = (j as f64 + 0.5) * 0.5 / (m / 2) as f64;
                let floor = (1.0f64 - x * x - y * y).sqrt().max(r_min);
                if floor < r_max {
                    grid += (floor.powi(-2) - r_max.powi(-2)) / 2.0
                        * (1.0 / m as f64)
                        * (0.5 / (m / 2) as f64);
                }
            }
        }
        assert!((mc - grid).abs() / grid < 0.01, "mc {mc} vs grid {grid}");
    }

    #[test]
    fn stabilizer_examples() {
        let ctx = make_field(-4).unwrap();
        // generic interior point
        let p = Point::from_coords(0.13, 0.21, 1.4);
        assert_eq!(stabilizer_order(&ctx, p, 2.0), 1);
        // j is fixed by the inversion and the unit fold
        let j = Point::from_coords(0.0, 0.0, 1.0);
        let nu = stabilizer_order(&ctx, j, 2.0);
        assert!(nu > 1, "nu(j) = {nu}");
        // stable once the radius covers the stabilizer
        assert_eq!(stabilizer_order(&ctx, j, 3.0), nu);
        assert_eq!(stabilizer_order(&ctx, j, 4.0), nu);
    }
}
