//! Exact arithmetic in the ring of integers of the five norm-Euclidean
//! imaginary quadratic fields, lattice enumeration, residue rings, and
//! Dedekind zeta values.
//!
//! Elements are stored as integer pairs `x + y*omega` where `omega` is the
//! standard second basis element of `O_K`. All ring operations are exact in
//! `i64` (with `i128` intermediates), so gcd/bezout identities hold with no
//! rounding at all.

use num_complex::Complex64;
use thiserror::Error;

/// Discriminants of the supported fields. These are exactly the
/// norm-Euclidean imaginary quadratic fields, which makes the remainder
/// step of `gcd` strictly norm-decreasing.
pub const SUPPORTED_DISCRIMINANTS: [i64; 5] = [-3, -4, -7, -8, -11];

#[derive(Debug, Error, PartialEq)]
pub enum FieldError {
    #[error("field not supported (requires Euclidean, h_K = 1): d_K = {0}")]
    UnsupportedDiscriminant(i64),
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("zero modulus")]
    ZeroModulus,
    #[error("zeta_K(s) requires s > 1, got s = {0}")]
    ZetaDomain(f64),
}

/// An element `x + y*omega` of `O_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgInt {
    pub x: i64,
    pub y: i64,
}

impl AlgInt {
    pub const ZERO: AlgInt = AlgInt { x: 0, y: 0 };
    pub const ONE: AlgInt = AlgInt { x: 1, y: 0 };

    pub fn new(x: i64, y: i64) -> Self {
        AlgInt { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn neg(&self) -> Self {
        AlgInt::new(-self.x, -self.y)
    }
}

/// An element `mu = m / sqrt(d_K)` of the inverse different `D^{-1}`.
///
/// The different of `O_K` is the principal ideal `(sqrt(d_K))`, so every
/// dual-lattice point is an algebraic integer divided by `sqrt(d_K)`
/// (principal square root, i.e. `i*sqrt(|d_K|)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DualPoint {
    pub m: AlgInt,
}

impl DualPoint {
    pub fn new(m: AlgInt) -> Self {
        DualPoint { m }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn neg(&self) -> Self {
        DualPoint::new(self.m.neg())
    }
}

/// Context for one imaginary quadratic field `K` of class number one.
#[derive(Debug, Clone)]
pub struct FieldContext {
    /// Fundamental discriminant, one of -3, -4, -7, -8, -11.
    pub d_k: i64,
    /// Complex embedding of the second basis element.
    pub omega: Complex64,
    /// Representatives of `O_K^x / {+-1}`.
    pub units_mod_pm: Vec<AlgInt>,
    /// Euclidean covolume of `O_K` in C, equal to `sqrt(|d_K|)/2`.
    pub covol: f64,
    /// Class number; always 1 here.
    pub h_k: i64,
    /// Trace of omega: `omega + conj(omega)`. 0 for even discriminants, 1 for odd.
    t: i64,
    /// Norm of omega: `omega * conj(omega)`.
    n: i64,
}

/// `tr(z) = z + conj(z) = 2 Re(z)`.
pub fn trace_c(z: Complex64) -> f64 {
    2.0 * z.re
}

/// Build the field context for a supported discriminant.
pub fn make_field(d_k: i64) -> Result<FieldContext, FieldError> {
    if !SUPPORTED_DISCRIMINANTS.contains(&d_k) {
        return Err(FieldError::UnsupportedDiscriminant(d_k));
    }
    let abs_d = (-d_k) as f64;
    let (t, n, omega) = if d_k % 4 == 0 {
        // omega = sqrt(d_K/4), purely imaginary
        let n = -d_k / 4;
        (0, n, Complex64::new(0.0, (n as f64).sqrt()))
    } else {
        // omega = (1 + sqrt(d_K))/2
        let n = (1 - d_k) / 4;
        (1, n, Complex64::new(0.5, abs_d.sqrt() / 2.0))
    };
    let units_mod_pm = match d_k {
        -4 => vec![AlgInt::new(1, 0), AlgInt::new(0, 1)],
        // powers of the primitive sixth root of unity omega = e^{i pi/3}
        -3 => vec![AlgInt::new(1, 0), AlgInt::new(0, 1), AlgInt::new(-1, 1)],
        _ => vec![AlgInt::new(1, 0)],
    };
    Ok(FieldContext {
        d_k,
        omega,
        units_mod_pm,
        covol: abs_d.sqrt() / 2.0,
        h_k: 1,
        t,
        n,
    })
}

impl FieldContext {
    /// All units of `O_K^x`, including both signs.
    pub fn units_full(&self) -> Vec<AlgInt> {
        let mut v = Vec::with_capacity(2 * self.units_mod_pm.len());
        for u in &self.units_mod_pm {
            v.push(*u);
            v.push(u.neg());
        }
        v
    }

    pub fn add(&self, a: AlgInt, b: AlgInt) -> AlgInt {
        AlgInt::new(a.x + b.x, a.y + b.y)
    }

    pub fn sub(&self, a: AlgInt, b: AlgInt) -> AlgInt {
        AlgInt::new(a.x - b.x, a.y - b.y)
    }

    /// Exact product using `omega^2 = t*omega - n`.
    pub fn mul(&self, a: AlgInt, b: AlgInt) -> AlgInt {
        let (ax, ay, bx, by) = (a.x as i128, a.y as i128, b.x as i128, b.y as i128);
        let x = ax * bx - (self.n as i128) * ay * by;
        let y = ax * by + ay * bx + (self.t as i128) * ay * by;
        AlgInt::new(
            i64::try_from(x).expect("overflow in O_K multiplication"),
            i64::try_from(y).expect("overflow in O_K multiplication"),
        )
    }

    /// Complex conjugate, `conj(x + y*omega) = (x + t*y) - y*omega`.
    pub fn conj(&self, a: AlgInt) -> AlgInt {
        AlgInt::new(a.x + self.t * a.y, -a.y)
    }

    /// Field norm `N(a) = a * conj(a) = x^2 + t*x*y + n*y^2`, a non-negative integer.
    pub fn norm(&self, a: AlgInt) -> i64 {
        let (x, y) = (a.x as i128, a.y as i128);
        let n = x * x + (self.t as i128) * x * y + (self.n as i128) * y * y;
        i64::try_from(n).expect("overflow in norm")
    }

    pub fn embed(&self, a: AlgInt) -> Complex64 {
        Complex64::new(a.x as f64, 0.0) + self.omega * (a.y as f64)
    }

    /// Complex embedding of a dual point `m / sqrt(d_K)`.
    pub fn embed_dual(&self, mu: DualPoint) -> Complex64 {
        let sqrt_d = Complex64::new(0.0, ((-self.d_k) as f64).sqrt());
        self.embed(mu.m) / sqrt_d
    }

    /// Norm-minimizing quotient of `a/b` in `O_K` (the Euclidean division step).
    ///
    /// Coordinate-wise rounding alone is not enough for d_K = -7, -11, so the
    /// quotient is chosen among the 3x3 neighborhood of the rounded point by
    /// exact remainder-norm comparison. For the five supported fields the
    /// remainder `a - q*b` then always has norm strictly smaller than `N(b)`.
    pub fn div_round(&self, a: AlgInt, b: AlgInt) -> AlgInt {
        debug_assert!(!b.is_zero());
        let num = self.mul(a, self.conj(b));
        let den = self.norm(b);
        let q0 = AlgInt::new(round_div(num.x, den), round_div(num.y, den));
        let mut best = q0;
        let mut best_norm = self.norm(self.sub(a, self.mul(q0, b)));
        for dx in -1..=1 {
            for dy in -1..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let q = AlgInt::new(q0.x + dx, q0.y + dy);
                let n = self.norm(self.sub(a, self.mul(q, b)));
                if n < best_norm {
                    best = q;
                    best_norm = n;
                }
            }
        }
        best
    }

    /// The canonical associate of `a`: among `{u*a : u in O_K^x}` the one
    /// maximizing `(Re, Im)` of the embedding, compared exactly via the
    /// integer pair `(2x + t*y, y)`.
    pub fn canonical_associate(&self, a: AlgInt) -> AlgInt {
        let mut best = a;
        let mut best_key = self.assoc_key(a);
        for u in self.units_full() {
            let cand = self.mul(u, a);
            let key = self.assoc_key(cand);
            if key > best_key {
                best = cand;
                best_key = key;
            }
        }
        best
    }

    fn assoc_key(&self, a: AlgInt) -> (i64, i64) {
        (2 * a.x + self.t * a.y, a.y)
    }

    /// Canonical representative of `c` modulo `{+-1}`: the one of `c, -c`
    /// with positive associate key.
    pub fn canonical_mod_pm(&self, c: AlgInt) -> AlgInt {
        if self.assoc_key(c) >= self.assoc_key(c.neg()) {
            c
        } else {
            c.neg()
        }
    }
}

fn round_div(a: i64, b: i64) -> i64 {
    // round to nearest, ties toward +infinity; any consistent tie rule works
    debug_assert!(b > 0);
    let (a, b) = (a as i128, b as i128);
    let q = (2 * a + b).div_euclid(2 * b);
    i64::try_from(q).expect("overflow in rounded division")
}

/// Euclidean gcd, returned as the canonical associate of a generator of `(a, b)`.
pub fn gcd(ctx: &FieldContext, a: AlgInt, b: AlgInt) -> Result<AlgInt, FieldError> {
    if a.is_zero() && b.is_zero() {
        return Err(FieldError::GcdOfZeros);
    }
    let (mut r0, mut r1) = (a, b);
    while !r1.is_zero() {
        let q = ctx.div_round(r0, r1);
        let r2 = ctx.sub(r0, ctx.mul(q, r1));
        debug_assert!(ctx.norm(r2) < ctx.norm(r1));
        r0 = r1;
        r1 = r2;
    }
    Ok(ctx.canonical_associate(r0))
}

/// Extended Euclid: returns `(g, u, v)` with `u*a + v*b = g = gcd(a, b)` exactly.
pub fn bezout(ctx: &FieldContext, a: AlgInt, b: AlgInt) -> Result<(AlgInt, AlgInt, AlgInt), FieldError> {
    if a.is_zero() && b.is_zero() {
        return Err(FieldError::GcdOfZeros);
    }
    let (mut r0, mut r1) = (a, b);
    let (mut u0, mut u1) = (AlgInt::ONE, AlgInt::ZERO);
    let (mut v0, mut v1) = (AlgInt::ZERO, AlgInt::ONE);
    while !r1.is_zero() {
        let q = ctx.div_round(r0, r1);
        let r2 = ctx.sub(r0, ctx.mul(q, r1));
        let u2 = ctx.sub(u0, ctx.mul(q, u1));
        let v2 = ctx.sub(v0, ctx.mul(q, v1));
        r0 = r1;
        r1 = r2;
        u0 = u1;
        u1 = u2;
        v0 = v1;
        v1 = v2;
    }
    // scale so the returned gcd is the canonical associate
    let g = ctx.canonical_associate(r0);
    let mut unit = AlgInt::ZERO;
    for u in ctx.units_full() {
        if ctx.mul(u, r0) == g {
            unit = u;
            break;
        }
    }
    debug_assert!(!unit.is_zero());
    Ok((g, ctx.mul(unit, u0), ctx.mul(unit, v0)))
}

/// All nonzero `a` in `O_K` with `|embed(a)| <= R`, duplicate-free.
pub fn enumerate_bounded(ctx: &FieldContext, radius: f64) -> Vec<AlgInt> {
    let mut out = Vec::new();
    if radius <= 0.0 {
        return out;
    }
    let r2 = radius * radius;
    // |x + y*omega|^2 = x^2 + t*x*y + n*y^2; Im part is y * sqrt(|d|)/2
    let im_step = ((-ctx.d_k) as f64).sqrt() / 2.0;
    let y_max = (radius / im_step).floor() as i64;
    for y in -y_max..=y_max {
        // solve x^2 + t*x*y + n*y^2 <= r2 for x
        let b = (ctx.t * y) as f64;
        let c = (ctx.n as f64) * (y * y) as f64 - r2;
        let disc = b * b - 4.0 * c;
        if disc < 0.0 {
            continue;
        }
        let lo = ((-b - disc.sqrt()) / 2.0).ceil() as i64;
        let hi = ((-b + disc.sqrt()) / 2.0).floor() as i64;
        for x in lo..=hi {
            let a = AlgInt::new(x, y);
            if a.is_zero() {
                continue;
            }
            // guard against floating slop on the boundary
            if (ctx.norm(a) as f64) <= r2 * (1.0 + 1e-12) {
                out.push(a);
            }
        }
    }
    out.sort_by_key(|a| (ctx.norm(*a), a.x, a.y));
    out
}

/// All lattice points (zero included) within `radius` of `center`,
/// sorted by (norm, x, y).
pub fn lattice_points_in_disk(
    ctx: &FieldContext,
    center: Complex64,
    radius: f64,
) -> Vec<AlgInt> {
    let mut out = Vec::new();
    if radius < 0.0 {
        return out;
    }
    let r2 = radius * radius * (1.0 + 1e-12) + 1e-12;
    let im_step = ((-ctx.d_k) as f64).sqrt() / 2.0;
    let y_lo = ((center.im - radius) / im_step).floor() as i64;
    let y_hi = ((center.im + radius) / im_step).ceil() as i64;
    for y in y_lo..=y_hi {
        // embed(x + y*omega) = x + y*Re(omega) + i*y*Im(omega)
        let re_off = y as f64 * ctx.omega.re;
        let dy = y as f64 * im_step - center.im;
        let rem = r2 - dy * dy;
        if rem < 0.0 {
            continue;
        }
        let half = rem.sqrt();
        let x_lo = (center.re - re_off - half).floor() as i64;
        let x_hi = (center.re - re_off + half).ceil() as i64;
        for x in x_lo..=x_hi {
            let a = AlgInt::new(x, y);
            if (ctx.embed(a) - center).norm_sqr() <= r2 {
                out.push(a);
            }
        }
    }
    out.sort_by_key(|a| (ctx.norm(*a), a.x, a.y));
    out
}

/// Nonzero dual points `mu = m/sqrt(d_K)` with `|mu| <= R`.
pub fn dual_points_bounded(ctx: &FieldContext, radius: f64) -> Vec<DualPoint> {
    let scale = ((-ctx.d_k) as f64).sqrt();
    enumerate_bounded(ctx, radius * scale)
        .into_iter()
        .map(DualPoint::new)
        .collect()
}

/// The residue ring `O_K / c O_K` in Hermite-normal-form coordinates.
///
/// Residue representatives are `{ x + y*omega : 0 <= x < ax, 0 <= y < dy }`
/// where `ax * dy = N(c)`.
#[derive(Debug, Clone)]
pub struct ResidueRing {
    pub c: AlgInt,
    ax: i64,
    dy: i64,
    /// second HNF basis vector (bx, dy) of the sublattice c*O_K
    bx: i64,
}

impl ResidueRing {
    pub fn new(ctx: &FieldContext, c: AlgInt) -> Result<Self, FieldError> {
        if c.is_zero() {
            return Err(FieldError::ZeroModulus);
        }
        // basis of c*O_K in (x, y) coordinates: v1 = c, v2 = c*omega
        let v1 = c;
        let v2 = ctx.mul(c, AlgInt::new(0, 1));
        // Find w2 = alpha*v1 + beta*v2 with w2.y = gcd(v1.y, v2.y) = g,
        // then w1 = (N(c)/g, 0) spans the kernel of the y-projection.
        let (g, alpha, beta) = ext_gcd_i64(v1.y, v2.y);
        let norm = ctx.norm(c);
        debug_assert!(g != 0, "c*O_K has full rank");
        let w2x = alpha
            .checked_mul(v1.x)
            .and_then(|p| beta.checked_mul(v2.x).map(|q| p + q))
            .expect("overflow in HNF");
        let ax = (norm / g).abs();
        let dy = g.abs();
        let bx = w2x.rem_euclid(ax);
        Ok(ResidueRing { c, ax, dy, bx })
    }

    pub fn card(&self) -> i64 {
        self.ax * self.dy
    }

    /// Dense index of a reduced residue, in `0..card()`.
    pub fn index_of(&self, reduced: AlgInt) -> usize {
        (reduced.y * self.ax + reduced.x) as usize
    }

    /// Canonical representative of `a` modulo `c O_K`.
    pub fn reduce(&self, a: AlgInt) -> AlgInt {
        let k = a.y.div_euclid(self.dy);
        let y = a.y - k * self.dy;
        let x = (a.x - k * self.bx).rem_euclid(self.ax);
        AlgInt::new(x, y)
    }

    /// All residues, in a fixed (x fastest) order.
    pub fn residues(&self) -> Vec<AlgInt> {
        let mut out = Vec::with_capacity(self.card() as usize);
        for y in 0..self.dy {
            for x in 0..self.ax {
                out.push(AlgInt::new(x, y));
            }
        }
        out
    }
}

fn ext_gcd_i64(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            return (-a, -1, 0);
        }
        return (a, 1, 0);
    }
    let (g, u, v) = ext_gcd_i64(b, a.rem_euclid(b));
    (g, v, u - a.div_euclid(b) * v)
}

/// All residues of `O_K / c O_K`, exactly `N(c)` of them.
pub fn residues_mod(ctx: &FieldContext, c: AlgInt) -> Result<Vec<AlgInt>, FieldError> {
    Ok(ResidueRing::new(ctx, c)?.residues())
}

/// All invertible residues `u` with their exact inverses `u*`, `u u* = 1 mod c`.
///
/// For `c` a unit the ring is trivial; by convention a single formal pair
/// `(0, 0)` is returned so that an empty exponent sum over it evaluates to 1.
pub fn units_mod(ctx: &FieldContext, c: AlgInt) -> Result<Vec<(AlgInt, AlgInt)>, FieldError> {
    let ring = ResidueRing::new(ctx, c)?;
    if ring.card() == 1 {
        return Ok(vec![(AlgInt::ZERO, AlgInt::ZERO)]);
    }
    let mut out = Vec::new();
    for r in ring.residues() {
        if r.is_zero() {
            continue;
        }
        let g = gcd(ctx, r, c)?;
        if ctx.norm(g) != 1 {
            continue;
        }
        let (g, u, _) = bezout(ctx, r, c)?;
        // u*r = g (mod c) with g a unit; the inverse of r is u * g^{-1}
        let g_inv = ctx.conj(g); // units have norm 1, so conj is the inverse
        let inv = ring.reduce(ctx.mul(u, g_inv));
        debug_assert_eq!(ring.reduce(ctx.mul(r, inv)), ring.reduce(AlgInt::ONE));
        out.push((r, inv));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Dedekind zeta via zeta(s) * L(s, chi_d)
// ---------------------------------------------------------------------------

/// Kronecker symbol (a|n) for n >= 0.
pub fn kronecker_symbol(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result = 1i64;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // factor out twos from n
    if n % 2 == 0 {
        if a % 2 == 0 {
            return 0;
        }
        while n % 2 == 0 {
            n /= 2;
            match a.rem_euclid(8) {
                3 | 5 => result = -result,
                _ => {}
            }
        }
    }
    a = a.rem_euclid(n);
    // Jacobi symbol (a|n) for odd n > 0
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            match n.rem_euclid(8) {
                3 | 5 => result = -result,
                _ => {}
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

const BERNOULLI_2J: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Hurwitz zeta `sum_{k>=0} (k+x)^{-s}` by Euler-Maclaurin, for `s > 1`, `0 < x <= 1`.
pub fn hurwitz_zeta(s: f64, x: f64) -> f64 {
    debug_assert!(s > 1.0 && x > 0.0);
    let n = 24usize;
    let mut sum = 0.0f64;
    for k in 0..n {
        sum += (k as f64 + x).powf(-s);
    }
    let a = n as f64 + x;
    sum += a.powf(1.0 - s) / (s - 1.0);
    sum += 0.5 * a.powf(-s);
    // correction terms B_{2j}/(2j)! * s(s+1)...(s+2j-2) * a^{1-s-2j}
    let mut poch = s; // rising factorial with 2j-1 factors, j = 1
    let mut fact = 2.0; // (2j)! at j = 1
    for (idx, b2j) in BERNOULLI_2J.iter().enumerate() {
        let j = idx as f64 + 1.0;
        sum += b2j / fact * poch * a.powf(1.0 - s - 2.0 * j);
        poch *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    }
    sum
}

/// Riemann zeta for real `s > 1` (Euler-Maclaurin).
pub fn riemann_zeta(s: f64) -> f64 {
    hurwitz_zeta(s, 1.0)
}

/// Dirichlet L-function `L(s, chi_d)` for the Kronecker character of
/// discriminant `d`, real `s > 1`.
pub fn dirichlet_l(d: i64, s: f64) -> f64 {
    let q = d.unsigned_abs() as i64;
    let mut sum = 0.0;
    for a in 1..=q {
        let chi = kronecker_symbol(d, a);
        if chi != 0 {
            sum += chi as f64 * hurwitz_zeta(s, a as f64 / q as f64);
        }
    }
    (q as f64).powf(-s) * sum
}

/// `zeta_K(s) = zeta(s) * L(s, chi_{d_K})` for real `s > 1`.
pub fn dedekind_zeta(ctx: &FieldContext, s: f64) -> Result<f64, FieldError> {
    if s <= 1.0 {
        return Err(FieldError::ZetaDomain(s));
    }
    Ok(riemann_zeta(s) * dirichlet_l(ctx.d_k, s))
}

/// Brute-force oracle: `zeta_K(s)` as the element sum
/// `sum_{0 < |a| <= R} N(a)^{-s} / |O_K^x|` plus the integral tail.
pub fn dedekind_zeta_ideal_oracle(ctx: &FieldContext, s: f64, radius: f64) -> f64 {
    let w = (2 * ctx.units_mod_pm.len()) as f64;
    let mut sum = 0.0;
    for a in enumerate_bounded(ctx, radius) {
        sum += (ctx.norm(a) as f64).powf(-s);
    }
    // tail: integral of |z|^{-2s} over |z| > R divided by covol
    let tail = 2.0 * std::f64::consts::PI / ctx.covol * radius.powf(2.0 - 2.0 * s)
        / (2.0 * s - 2.0);
    (sum + tail) / w
}
