use num_traits::Zero;

use crate::bigmath::{BigFloat, BigRational, Real};
use crate::eigensolve::parallel::par_map;
use crate::error::{Result, RpmError};
use crate::rpm::{CheckedHankel, CoefficientTable, HankelValue, Sign};

/// Search interval for `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    lo: f64,
    hi: f64,
}

impl Window {
    /// A finite interval on the bound-state side of zero for `sigma`.
    pub fn new(lo: f64, hi: f64, sigma: Sign) -> Result<Self> {
        let bad = |reason: &str| Err(RpmError::InvalidWindow { lo, hi, reason: reason.to_string() });
        if !(lo.is_finite() && hi.is_finite()) {
            return bad("bounds must be finite");
        }
        if lo >= hi {
            return bad("lower bound must be below upper bound");
        }
        match sigma {
            Sign::Minus if hi >= 0.0 => bad("bound states of a negative potential have eps < 0"),
            Sign::Plus if lo <= 0.0 => bad("bound states of a positive potential have eps > 0"),
            _ => Ok(Window { lo, hi }),
        }
    }

    /// `[−10, −10⁻⁶]` for `σ = −1`; `[10⁻⁶, upper]` for `σ = +1`.
    pub fn default_for(sigma: Sign, upper: f64) -> Result<Self> {
        match sigma {
            Sign::Minus => Window::new(-10.0, -1e-6, sigma),
            Sign::Plus => Window::new(1e-6, upper, sigma),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Scan abscissae: geometric in `|ε|` on the negative side (levels
    /// accumulate at 0⁻), uniform on the positive side.
    pub fn grid(&self, per_decade: usize, uniform_points: usize) -> Vec<f64> {
        if self.hi < 0.0 {
            let (a, b) = (-self.hi, -self.lo);
            let decades = (b / a).log10();
            let n = ((decades * per_decade as f64).ceil() as usize).max(2);
            (0..=n).map(|k| -b * (a / b).powf(k as f64 / n as f64)).collect()
        } else {
            let n = uniform_points.max(2);
            (0..=n).map(|k| self.lo + (self.hi - self.lo) * k as f64 / n as f64).collect()
        }
    }
}

/// How a reported root is certified.
#[derive(Debug, Clone, PartialEq)]
pub enum RootStatus {
    /// `H` has trusted values of opposite sign at both ends.
    Bracketed { lo: BigFloat, hi: BigFloat },
    /// No sign change could be certified (even multiplicity, or values below
    /// the precision floor on both sides); the Newton iteration converged
    /// and `|H|` at the root is below the noise estimate.
    Residual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub value: BigFloat,
    pub status: RootStatus,
}

impl Root {
    pub fn is_bracketed(&self) -> bool {
        matches!(self.status, RootStatus::Bracketed { .. })
    }
}

/// Real roots of `H_D^d` found in a window, ascending.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub dim: usize,
    pub d: usize,
    pub precision: u32,
    /// Roots are resolved to `10^-target_digits` relative.
    pub target_digits: u32,
    pub roots: Vec<Root>,
}

impl RootSet {
    pub fn values(&self) -> Vec<BigFloat> {
        self.roots.iter().map(|r| r.value.clone()).collect()
    }
}

/// Knobs for [`find_roots`].
#[derive(Debug, Clone, Copy)]
pub struct FindOptions {
    /// Refinement target: iterates closer than `10^-target_digits` relative.
    pub target_digits: u32,
    /// Whether to run the sign-change scan (seeds are always refined).
    pub scan: bool,
    pub grid_per_decade: usize,
    pub grid_points: usize,
    pub threads: usize,
}

impl Default for FindOptions {
    fn default() -> Self {
        FindOptions { target_digits: 25, scan: true, grid_per_decade: 40, grid_points: 400, threads: 1 }
    }
}

/// Largest denominator tried when snapping a stalled iterate to a rational.
const SNAP_MAX_DENOMINATOR: u32 = 1 << 20;
/// Number of convergents tried per snap.
const SNAP_CANDIDATES: usize = 3;
/// Relative Newton move from a seed beyond which the nearest sign change
/// around the seed is searched as well.
const WALK_AFTER: f64 = 1e-8;

/// Outcome of refining one starting point.
#[derive(Debug, Clone)]
enum Refined {
    Root(BigFloat),
    Lost,
    NeedPrecision,
}

/// Root refinement on one checked evaluator.
pub(crate) struct Refiner<'a> {
    hankel: &'a CheckedHankel,
    window: Window,
    /// Relative tolerance `10^-target_digits`.
    tol: f64,
    /// Bits lost to cancellation away from roots at this `D`.
    lost_bits: f64,
}

impl<'a> Refiner<'a> {
    pub(crate) fn new(hankel: &'a CheckedHankel, window: Window, target_digits: u32, lost_bits: f64) -> Self {
        Refiner { hankel, window, tol: 10f64.powi(-(target_digits as i32)), lost_bits }
    }

    fn bits(&self) -> u32 {
        self.hankel.precision()
    }

    fn num(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(self.bits(), v)
    }

    /// Relative step for central differences: half of the clean bits.
    fn diff_step(&self, x: &BigFloat) -> BigFloat {
        let clean = (f64::from(self.bits()) - self.lost_bits).max(8.0);
        let e = -(clean / 2.0).floor() as i32;
        let ax = if x.is_zero() { self.num(1.0) } else { x.abs() };
        ax.mul_2exp(e)
    }

    fn derivative(&self, x: &BigFloat) -> Option<BigFloat> {
        let h = self.diff_step(x);
        let fp = self.hankel.fast(&(x + &h));
        let fm = self.hankel.fast(&(x - &h));
        let d = (fp - fm) / &(h.mul_2exp(1));
        (!d.is_zero()).then_some(d)
    }

    /// Width of the region around `x` where `H` is below its noise floor.
    fn noise_width_log2(&self, v: &HankelValue, d: &BigFloat) -> f64 {
        v.noise_log2.max(v.value.log2_abs()) - d.log2_abs()
    }

    fn close_enough(&self, step_log2: f64, x: &BigFloat) -> bool {
        step_log2 <= x.log2_abs() + self.tol.log2()
    }

    /// Roots of high multiplicity (typical of exactly solvable problems,
    /// where every Hankel entry vanishes at the eigenvalue) sit below the
    /// precision floor long before Newton reaches the target. Stalled
    /// iterates are therefore tested against nearby rationals of small
    /// denominator, where `H` is evaluated exactly; an exact zero is a root.
    fn snap(&self, x: &BigFloat, width_log2: f64) -> Option<BigFloat> {
        let xr = x.to_rational()?;
        let floor = x.log2_abs() + self.tol.log2() + self.stall_slack_log2();
        let width = self.num(2f64.powf(width_log2.max(floor).min(x.log2_abs() - 8.0)));
        let candidates = xr.convergents(&rug::Integer::from(SNAP_MAX_DENOMINATOR));
        candidates
            .into_iter()
            .filter(|r| (x - &BigFloat::from_rational(self.bits(), r)).abs() <= width)
            .take(SNAP_CANDIDATES)
            .find(|r| self.hankel.exact_at(r).is_zero())
            .map(|r: BigRational| BigFloat::from_rational(self.bits(), &r))
    }

    /// Slack on the distance to a multiple root implied by a stalled
    /// iterate: up to the multiplicity, which is at most `D`.
    fn stall_slack_log2(&self) -> f64 {
        (4.0 * self.hankel.dim() as f64).log2()
    }

    /// Newton iteration; with `bracket` the iterate is kept inside it and
    /// bisection replaces steps that would leave it.
    fn newton(&self, seed: &BigFloat, mut bracket: Option<(BigFloat, BigFloat, i32)>) -> Refined {
        let mut x = seed.with_prec(self.bits());
        let max_step = 0.25;
        let mut last_step = f64::INFINITY;
        for _ in 0..80 {
            let v = self.hankel.value(&x);
            if v.value.is_zero() && v.noise_log2 == f64::NEG_INFINITY {
                return Refined::Root(x);
            }
            let d = match self.derivative(&x) {
                Some(d) => d,
                None => return Refined::Lost,
            };
            if !v.is_trusted() {
                let width = self.noise_width_log2(&v, &d);
                if self.close_enough(width, &x) {
                    return Refined::Root(self.snap(&x, width).unwrap_or(x));
                }
                return match self.snap(&x, width + self.stall_slack_log2()) {
                    Some(r) => Refined::Root(r),
                    None => Refined::NeedPrecision,
                };
            }
            if let Some((lo, hi, slo)) = &mut bracket {
                if v.value.signum_i() == *slo {
                    *lo = x.clone();
                } else {
                    *hi = x.clone();
                }
            }
            let mut step = v.value.clone() / &d;
            let limit = x.abs() * &self.num(max_step);
            if step.abs() > limit {
                step = if step.signum_i() > 0 { limit } else { -limit };
            }
            let mut next = &x - &step;
            if let Some((lo, hi, _)) = &bracket {
                let (a, b) = if lo < hi { (lo, hi) } else { (hi, lo) };
                if next <= *a || next >= *b {
                    next = (lo + hi).mul_2exp(-1);
                    step = &x - &next;
                }
            }
            let step_log2 = step.log2_abs();
            last_step = step_log2;
            x = next;
            if !self.window.contains(x.to_f64()) && bracket.is_none() {
                return Refined::Lost;
            }
            if self.close_enough(step_log2, &x) {
                return Refined::Root(self.snap(&x, step_log2 + 1.0).unwrap_or(x));
            }
            if let Some((lo, hi, _)) = &bracket {
                let w = (lo - hi).log2_abs();
                if self.close_enough(w, &x) {
                    return Refined::Root(self.snap(&x, w).unwrap_or(x));
                }
            }
        }
        match self.snap(&x, last_step + self.stall_slack_log2()) {
            Some(r) => Refined::Root(r),
            None => Refined::Lost,
        }
    }

    /// Bisection on checked signs until the bracket is narrow, then Newton.
    fn refine_bracket(&self, a: f64, sa: i32, b: f64) -> Refined {
        self.narrow(self.num(a), sa, self.num(b))
    }

    fn narrow(&self, mut lo: BigFloat, sa: i32, mut hi: BigFloat) -> Refined {
        for _ in 0..24 {
            let mid = (&lo + &hi).mul_2exp(-1);
            let v = self.hankel.value(&mid);
            match v.sign() {
                Some(s) if s == sa => lo = mid,
                Some(0) => return Refined::Root(mid),
                Some(_) => hi = mid,
                None => break,
            }
        }
        let mid = (&lo + &hi).mul_2exp(-1);
        self.newton(&mid, Some((lo, hi, sa)))
    }

    /// Candidate roots for a seed: Newton's method from the seed and, when
    /// Newton fails or moves further than `WALK_AFTER`, the nearest sign
    /// change around it (signs at `s ± |s|·10^-k`, from three decades below
    /// the seed's last relative move `walk` outwards; `None` skips it). Near
    /// clusters of close roots Newton may jump to any member, so both are
    /// kept and tracking sorts out which one continues a sequence. When
    /// neither lands near the seed, the centre of a close pair is tried.
    fn refine_seed(&self, seed: &BigFloat, walk: Option<f64>) -> Vec<Refined> {
        let s = seed.with_prec(self.bits());
        let newton = self.newton(&s, None);
        let moved = match walk {
            Some(m) if !self.near(&newton, &s) => m,
            _ => return vec![newton],
        };
        let s0 = match self.hankel.value(&s).sign() {
            Some(0) => return vec![Refined::Root(s)],
            Some(s0) => s0,
            None => return vec![newton],
        };
        let mut out = vec![newton];
        // start a few decades below the seed's last move
        let finest = self.tol.log10().abs().ceil() as i32 + 1;
        let top = if moved > 0.0 { finest.min(-moved.log10().floor() as i32 + 3) } else { finest };
        'walk: for k in (1..=top).rev() {
            let off = s.abs() * &self.num(10f64.powi(-k));
            for x in [&s - &off, &s + &off] {
                if !self.window.contains(x.to_f64()) {
                    continue;
                }
                match self.hankel.value(&x).sign() {
                    Some(0) => {
                        out.push(Refined::Root(x));
                        break 'walk;
                    }
                    Some(sx) if sx != s0 => {
                        out.push(self.narrow(s.clone(), s0, x));
                        break 'walk;
                    }
                    _ => {}
                }
            }
        }
        if !out.iter().any(|r| self.near(r, &s)) {
            if let Some(c) = self.pair_center(&s) {
                out.push(Refined::Root(c));
            }
        }
        out
    }

    fn near(&self, r: &Refined, s: &BigFloat) -> bool {
        matches!(r, Refined::Root(x) if (x - s).abs() <= s.abs() * &self.num(WALK_AFTER))
    }

    /// Centre of a close pair of roots (real or complex conjugate) near `s`,
    /// where `H` touches zero without a resolvable sign change: the local
    /// extremum of `H`, found by Newton's method on `H'` with finite
    /// differences. Accepted when the implied half-separation
    /// `sqrt(2|H|/|H''|)` is below `WALK_AFTER` relative.
    fn pair_center(&self, s: &BigFloat) -> Option<BigFloat> {
        let clean = (f64::from(self.bits()) - self.lost_bits).max(12.0);
        let e = -(clean / 3.0).floor() as i32;
        let mut x = s.clone();
        let mut d2 = self.num(0.0);
        let mut f0 = self.num(0.0);
        let mut done = false;
        for _ in 0..60 {
            let h = x.abs().mul_2exp(e);
            f0 = self.hankel.fast(&x);
            let fp = self.hankel.fast(&(&x + &h));
            let fm = self.hankel.fast(&(&x - &h));
            let d1 = (&fp - &fm) / &h.mul_2exp(1);
            d2 = (fp - f0.mul_2exp(1) + fm) / &(&h * &h);
            if d2.is_zero() {
                return None;
            }
            let mut step = d1 / &d2;
            let limit = x.abs() * &self.num(1e-3);
            if step.abs() > limit {
                step = if step.signum_i() > 0 { limit } else { -limit };
            }
            x = &x - &step;
            if self.close_enough(step.log2_abs(), &x) {
                done = true;
                break;
            }
        }
        let half_gap = (f0.abs().mul_2exp(1) / &d2.abs()).sqrt();
        let ok = done
            && half_gap <= x.abs() * &self.num(WALK_AFTER)
            && (&x - s).abs() <= s.abs() * &self.num(1e-4)
            && self.window.contains(x.to_f64());
        ok.then_some(x)
    }

    /// A certified bracket of relative width `2·10^-target_digits` around
    /// `x`, when the signs on both sides are trusted and differ.
    fn certify(&self, x: BigFloat) -> Root {
        let eta = x.abs() * &self.num(self.tol);
        let lo = &x - &eta;
        let hi = &x + &eta;
        let (vl, vh) = (self.hankel.value(&lo), self.hankel.value(&hi));
        let status = match (vl.sign(), vh.sign()) {
            (Some(a), Some(b)) if a * b < 0 => RootStatus::Bracketed { lo, hi },
            _ => RootStatus::Residual,
        };
        Root { value: x, status }
    }
}

/// Estimated bits lost to cancellation at `D`: probe a few points of the
/// window with checked evaluations. `None` when every probe is below the
/// precision floor.
pub(crate) fn calibrate(hankel: &CheckedHankel, window: &Window, threads: usize) -> Option<f64> {
    let grid = window.grid(2, 4);
    let step = (grid.len() / 5).max(1);
    let probes: Vec<f64> = grid.iter().skip(step / 2).step_by(step).cloned().collect();
    let bits = hankel.precision();
    let trusted: Vec<f64> = par_map(&probes, threads, |&x| {
        let v = hankel.value(&BigFloat::from_f64(bits, x));
        v.is_trusted().then_some(v.trusted_bits)
    })
    .into_iter()
    .flatten()
    .collect();
    if trusted.is_empty() {
        return None;
    }
    // the median probe is a robust estimate: single probes can sit near a root
    let mut t = trusted;
    t.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Some(f64::from(bits) - t[t.len() / 2])
}

/// Some small `D` give a Hankel determinant that is the zero polynomial
/// (sparse coefficient tables when `q > 1`); detected by exact evaluation
/// at three rational points of the window.
fn vanishes_identically(hankel: &CheckedHankel, window: &Window) -> bool {
    let (lo, hi) = (window.lo(), window.hi());
    [0.25, 0.5, 0.75].iter().all(|t| {
        let x = ((lo + (hi - lo) * t) * 4096.0).round() as i64;
        hankel.exact_at(&BigRational::new(x, 4096)).is_zero()
    })
}

/// Roots of `H_D^d(ε)` in `window` at `bits` of precision.
///
/// Seeds (typically the roots at `D − 1`) are refined first, each by
/// Newton's method with central-difference derivatives and to the nearest
/// sign change around it. The sign-change scan then
/// isolates the remaining roots on a grid; each new bracket is narrowed by
/// bisection and finished by bracket-safeguarded Newton. Fails with
/// `PrecisionExhausted` when values below the precision floor prevent
/// reaching the target, so the caller can raise `bits`.
pub fn find_roots(
    table: &CoefficientTable,
    dim: usize,
    d: usize,
    window: &Window,
    seeds: Option<&[BigFloat]>,
    bits: u32,
    opts: &FindOptions,
) -> Result<RootSet> {
    let hankel = CheckedHankel::new(table, dim, d, bits)?;
    find_roots_with(&hankel, d, window, seeds.unwrap_or(&[]), &[], opts)
}

/// `walk[i]` limits the sign-change search to seeds that are settling and
/// carries their last relative move; seeds without an entry are always
/// searched, from the finest scale.
pub(crate) fn find_roots_with(
    hankel: &CheckedHankel,
    d: usize,
    window: &Window,
    seeds: &[BigFloat],
    walk: &[Option<f64>],
    opts: &FindOptions,
) -> Result<RootSet> {
    let dim = hankel.dim();
    let bits = hankel.precision();
    let exhausted = || RpmError::PrecisionExhausted { dim, bits };
    let empty = || RootSet { dim, d, precision: bits, target_digits: opts.target_digits, roots: Vec::new() };
    let lost = match calibrate(hankel, window, opts.threads) {
        Some(lost) => lost,
        None if vanishes_identically(hankel, window) => return Ok(empty()),
        None => return Err(exhausted()),
    };
    let clean_digits = (f64::from(bits) - lost) * std::f64::consts::LOG10_2;
    if clean_digits < f64::from(opts.target_digits) + 3.0 {
        return Err(exhausted());
    }
    let refiner = Refiner::new(hankel, *window, opts.target_digits, lost);

    let mut found: Vec<BigFloat> = Vec::new();
    let indexed: Vec<(usize, &BigFloat)> = seeds.iter().enumerate().collect();
    let refined = par_map(&indexed, opts.threads, |&(i, s)| refiner.refine_seed(s, walk.get(i).copied().unwrap_or(Some(0.0))));
    for r in refined.into_iter().flatten() {
        match r {
            Refined::Root(x) if window.contains(x.to_f64()) => found.push(x),
            Refined::NeedPrecision => return Err(exhausted()),
            _ => {}
        }
    }

    if opts.scan {
        let grid = window.grid(opts.grid_per_decade, opts.grid_points);
        let signs: Vec<Option<i32>> =
            par_map(&grid, opts.threads, |&x| hankel.value(&BigFloat::from_f64(bits, x)).sign());
        let unknown = signs.iter().filter(|s| s.is_none()).count();
        if 2 * unknown > grid.len() {
            return Err(exhausted());
        }
        let mut brackets = Vec::new();
        let mut last: Option<(f64, i32)> = None;
        for (x, s) in grid.iter().zip(&signs) {
            match s {
                Some(0) => found.push(BigFloat::from_f64(bits, *x)),
                Some(s) => {
                    if let Some((a, sa)) = last {
                        if sa != *s {
                            let covered = found.iter().any(|r| {
                                let v = r.to_f64();
                                a <= v && v <= *x
                            });
                            if !covered {
                                brackets.push((a, sa, *x));
                            }
                        }
                    }
                    last = Some((*x, *s));
                }
                None => {}
            }
        }
        for r in par_map(&brackets, opts.threads, |&(a, sa, b)| refiner.refine_bracket(a, sa, b)) {
            match r {
                Refined::Root(x) => found.push(x),
                Refined::NeedPrecision => return Err(exhausted()),
                Refined::Lost => {}
            }
        }
    }

    found.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    let mut unique: Vec<BigFloat> = Vec::new();
    let merge = 10.0 * refiner.tol;
    for x in found {
        if let Some(prev) = unique.last() {
            let gap = (&x - prev).abs().to_f64();
            if gap <= merge * x.abs().to_f64() {
                continue;
            }
        }
        unique.push(x);
    }
    let roots = par_map(&unique, opts.threads, |x| refiner.certify(x.clone()));
    Ok(RootSet { dim, d, precision: bits, target_digits: opts.target_digits, roots })
}
