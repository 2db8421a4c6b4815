use crate::bound::{method, BoundKind, Metric, MetricBound};
use crate::error::{MetricsError, Result};
use crate::geometry::{pushforward_norm, BasePoint, ComplexPoint2, EggRingDomain, TangentVector2};
use crate::kobayashi::disc::{disc_feasible, grid_feasibility, grid_is_feasible, CandidateDisc, FeasibilityReport};
use crate::scalar::Scalar;

pub const MIN_SEARCH_BUDGET: usize = 100;

/// How the `w` coefficient `μ` of the disc family is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MuMode<T> {
    /// Coarse log grid over `[δ^{1/2}, 1]` followed by golden section.
    Search,
    /// Only `λ` is optimized.
    Fixed(T),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscSearchConfig<T> {
    /// Maximum number of feasibility evaluations during the search. The
    /// final re-check is not counted.
    pub budget: usize,
    pub radial_steps: usize,
    pub angular_steps: usize,
    pub margin: T,
    /// Density multiplier of the final re-check.
    pub certify_factor: usize,
    pub mu_grid: usize,
    /// Relative width at which the bisection on `λ` stops.
    pub lambda_tolerance: T,
    /// Width in `ln μ` at which the golden section stops.
    pub mu_tolerance: T,
    pub mu_mode: MuMode<T>,
}

impl<T: Scalar> Default for DiscSearchConfig<T> {
    fn default() -> Self {
        Self {
            budget: 600,
            radial_steps: 256,
            angular_steps: 256,
            margin: T::lit(1e-9),
            certify_factor: 4,
            mu_grid: 9,
            lambda_tolerance: T::lit(1e-4),
            mu_tolerance: T::lit(1e-3),
            mu_mode: MuMode::Search,
        }
    }
}

impl<T: Scalar> DiscSearchConfig<T> {
    pub fn with_budget(budget: usize) -> Self {
        Self { budget, ..Self::default() }
    }

    pub fn linear_only() -> Self {
        Self { mu_mode: MuMode::Fixed(T::zero()), ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.budget < MIN_SEARCH_BUDGET {
            return Err(MetricsError::Config(format!(
                "disc search budget {} is below the minimum of {MIN_SEARCH_BUDGET}",
                self.budget
            )));
        }
        if self.certify_factor == 0 || self.mu_grid < 3 {
            return Err(MetricsError::Config("certify factor must be positive and the mu grid hold 3 points".into()));
        }
        if !(self.lambda_tolerance > T::zero() && self.mu_tolerance > T::zero()) {
            return Err(MetricsError::Config("search tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscSearchOutcome<T> {
    /// `1/λ*` for the direction `(1, 0)`.
    pub bound: MetricBound<T>,
    pub disc: CandidateDisc<T>,
    pub evaluations: usize,
    /// Report of the dense re-check of `disc`.
    pub certificate: FeasibilityReport<T>,
}

struct Search<'a, T> {
    domain: &'a EggRingDomain<T>,
    base: &'a BasePoint<T>,
    cfg: &'a DiscSearchConfig<T>,
    evaluations: usize,
}

impl<T: Scalar> Search<'_, T> {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.cfg.budget
    }

    fn feasible(&mut self, lambda: T, mu: T) -> Result<bool> {
        self.evaluations += 1;
        let disc = CandidateDisc::new(*self.base, lambda, mu);
        grid_is_feasible(|z| disc.eval(z), self.domain, self.cfg.radial_steps, self.cfg.angular_steps, self.cfg.margin)
    }

    /// Largest feasible `λ` for fixed `μ`, or zero. Feasibility is monotone
    /// in `λ` along the family, so a geometric bisection brackets it.
    fn lambda_star(&mut self, mu: T) -> Result<T> {
        if self.exhausted() {
            return Ok(T::zero());
        }
        let two = T::lit(2.0);
        let mut lo = self.base.delta / two;
        let mut hi;
        if self.feasible(lo, mu)? {
            hi = lo * two;
            while self.feasible(hi, mu)? {
                lo = hi;
                hi = hi * two;
                if self.exhausted() || lo > T::one() {
                    return Ok(lo);
                }
            }
        } else {
            let mut found = false;
            hi = lo;
            for _ in 0..8 {
                if self.exhausted() {
                    break;
                }
                lo = hi / T::lit(4.0);
                if self.feasible(lo, mu)? {
                    found = true;
                    break;
                }
                hi = lo;
            }
            if !found {
                return Ok(T::zero());
            }
        }
        while hi / lo > T::one() + self.cfg.lambda_tolerance && !self.exhausted() {
            let mid = (lo * hi).sqrt();
            if self.feasible(mid, mu)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    fn optimize_mu(&mut self) -> Result<(T, T)> {
        let mut best = (self.lambda_star(T::zero())?, T::zero());
        let n = self.cfg.mu_grid;
        let ln_lo = self.base.delta.ln() / T::lit(2.0);
        let ln_at = |k: usize| ln_lo - ln_lo * T::from_count(k) / T::from_count(n - 1);
        let mut grid = Vec::with_capacity(n);
        for k in 0..n {
            if self.exhausted() {
                grid.push(T::zero());
                continue;
            }
            let lambda = self.lambda_star(ln_at(k).exp())?;
            grid.push(lambda);
        }
        // First maximum, so ties resolve toward the smaller μ.
        let mut k_best = 0;
        for k in 1..n {
            if grid[k] > grid[k_best] {
                k_best = k;
            }
        }
        if grid[k_best] > best.0 {
            best = (grid[k_best], ln_at(k_best).exp());
        }
        if grid[k_best] == T::zero() {
            return Ok(best);
        }

        let mut a = ln_at(k_best.saturating_sub(1));
        let mut b = ln_at((k_best + 1).min(n - 1));
        let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
        let mut c = b - (b - a) * inv_phi;
        let mut d = a + (b - a) * inv_phi;
        let mut gc = self.lambda_star(c.exp())?;
        let mut gd = self.lambda_star(d.exp())?;
        while b - a > self.cfg.mu_tolerance && !self.exhausted() {
            if gc >= gd {
                b = d;
                d = c;
                gd = gc;
                c = b - (b - a) * inv_phi;
                gc = self.lambda_star(c.exp())?;
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + (b - a) * inv_phi;
                gd = self.lambda_star(d.exp())?;
            }
        }
        for (lambda, x) in [(gc, c), (gd, d)] {
            if lambda > best.0 {
                best = (lambda, x.exp());
            }
        }
        Ok(best)
    }
}

/// Largest `λ` with `(p + λζ, μζ²)` feasible for fixed `μ`, up to the
/// bisection tolerance.
pub fn max_lambda<T: Scalar>(
    domain: &EggRingDomain<T>,
    base: &BasePoint<T>,
    mu: T,
    cfg: &DiscSearchConfig<T>,
) -> Result<T> {
    cfg.validate()?;
    Search { domain, base, cfg, evaluations: 0 }.lambda_star(mu)
}

/// Upper bound `1/λ*` on the Kobayashi metric at `P_δ` in the normal
/// direction `(1, 0)`, from the best disc `(p + λζ, μζ²)` found.
///
/// The winning disc is re-checked on a grid `certify_factor` times denser
/// and `λ` is shrunk until it passes, so the bound is certified up to that
/// sampling resolution.
pub fn kobayashi_upper_disc<T: Scalar>(
    domain: &EggRingDomain<T>,
    base: &BasePoint<T>,
    cfg: &DiscSearchConfig<T>,
) -> Result<DiscSearchOutcome<T>> {
    cfg.validate()?;
    let mut search = Search { domain, base, cfg, evaluations: 0 };
    let (mut lambda, mu) = match cfg.mu_mode {
        MuMode::Search => search.optimize_mu()?,
        MuMode::Fixed(mu) => (search.lambda_star(mu)?, mu),
    };
    if !(lambda > T::zero()) {
        return Err(MetricsError::Optimization(format!("no feasible disc with positive lambda at delta = {}", base.delta)));
    }
    let radial = cfg.radial_steps * cfg.certify_factor;
    let angular = cfg.angular_steps * cfg.certify_factor;
    for _ in 0..64 {
        let disc = CandidateDisc::new(*base, lambda, mu);
        let certificate = disc_feasible(&disc, domain, radial, angular, cfg.margin)?;
        if certificate.feasible {
            let bound = MetricBound::new(
                Metric::Kobayashi,
                BoundKind::Upper,
                T::one() / lambda,
                method::DISC_SEARCH,
                base.delta,
                TangentVector2::normal(),
            );
            return Ok(DiscSearchOutcome { bound, disc, evaluations: search.evaluations, certificate });
        }
        lambda = lambda * (T::one() - T::lit(1e-3));
    }
    Err(MetricsError::Optimization(format!(
        "disc with lambda = {lambda}, mu = {mu} failed the dense re-check at delta = {}",
        base.delta
    )))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentialCrosscheck<T> {
    /// Ball metric at `P_δ` in the direction `(0, 1)`.
    pub exact: T,
    /// `1/μ*` from the discs `(p, μζ)`.
    pub disc_value: T,
    pub mu_star: T,
    pub relative_deviation: T,
    pub within_tolerance: bool,
}

pub const TANGENTIAL_TOLERANCE: f64 = 0.05;

/// Disc search in the tangential direction `(0, 1)`, where the complex
/// line through `P_δ` misses the inner egg and the metric is exact.
pub fn tangential_crosscheck<T: Scalar>(
    domain: &EggRingDomain<T>,
    base: &BasePoint<T>,
    cfg: &DiscSearchConfig<T>,
) -> Result<TangentialCrosscheck<T>> {
    cfg.validate()?;
    let p = base.p;
    let feasible = |mu: T| {
        grid_is_feasible(
            |zeta| ComplexPoint2::new(zeta * T::zero() + p, zeta * mu),
            domain,
            cfg.radial_steps,
            cfg.angular_steps,
            cfg.margin,
        )
    };
    let (mut lo, mut hi) = (T::zero(), T::one());
    let mut evaluations = 0;
    while hi - lo > cfg.lambda_tolerance * hi && evaluations < cfg.budget {
        let mid = (lo + hi) / T::lit(2.0);
        evaluations += 1;
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let dense = |mu: T| {
        grid_feasibility(
            |zeta| ComplexPoint2::new(zeta * T::zero() + p, zeta * mu),
            domain,
            cfg.radial_steps * cfg.certify_factor,
            cfg.angular_steps * cfg.certify_factor,
            cfg.margin,
        )
    };
    while lo > T::zero() && !dense(lo)?.feasible {
        lo = lo * (T::one() - T::lit(1e-3));
    }
    if !(lo > T::zero()) {
        return Err(MetricsError::Optimization("no feasible tangential disc".into()));
    }
    let exact = pushforward_norm(p, &TangentVector2::tangential())?;
    let disc_value = T::one() / lo;
    let relative_deviation = (disc_value - exact).abs() / exact;
    Ok(TangentialCrosscheck {
        exact,
        disc_value,
        mu_star: lo,
        relative_deviation,
        within_tolerance: relative_deviation <= T::lit(TANGENTIAL_TOLERANCE),
    })
}
