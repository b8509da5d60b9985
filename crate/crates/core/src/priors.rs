//! Encodings of partial prior information.
//!
//! The nested random-set priors ([`FocalPrior`], [`IntervalPrior`],
//! [`SparsityPrior`]) are possibility measures described by a contour `q`;
//! [`FiniteCredalSet`] lists precise conjugate priors for the generalized
//! Bayes envelope; [`CompatiblePrior`] is one concrete member of a credal set
//! used to simulate `Θ` in the diagnostics.

use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::assertion::{Assertion, Interval, IntervalSet};
use crate::contour::{Contour, Shape, Side};
use crate::error::{Error, Result};
use crate::numerics::binom_cdf;
use crate::point::ParamPoint;
use crate::possibility::UpperProbability;
use crate::rng::Stream;

const MASS_TOL: f64 = 1e-12;

/// A scalar random set with finitely many nested focal elements
/// `T_1 ⊂ T_2 ⊂ … ⊂ T_m` and masses `m(T_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalPrior {
    elements: Vec<IntervalSet>,
    masses: Vec<f64>,
}

impl FocalPrior {
    /// Builds the prior from `(focal element, mass)` pairs listed innermost
    /// first.
    pub fn new(pairs: Vec<(IntervalSet, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::invalid("focal prior needs at least one focal element"));
        }
        let (elements, masses): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        if masses.iter().any(|m| !(*m > 0.0)) {
            return Err(Error::invalid("focal masses must be positive"));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::invalid(format!("focal masses sum to {total}, not 1")));
        }
        if elements.iter().any(IntervalSet::is_empty) {
            return Err(Error::invalid("focal elements must be non-empty"));
        }
        for w in elements.windows(2) {
            if !w[0].is_subset_of(&w[1]) {
                return Err(Error::invalid(format!("focal elements not nested: {} ⊄ {}", w[0], w[1])));
            }
        }
        Ok(FocalPrior { elements, masses })
    }

    /// The vacuous prior: all mass on the real line.
    pub fn vacuous() -> Self {
        FocalPrior {
            elements: vec![IntervalSet::real_line()],
            masses: vec![1.0],
        }
    }

    pub fn elements(&self) -> &[IntervalSet] {
        &self.elements
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn focal(&self) -> impl Iterator<Item = (&IntervalSet, f64)> {
        self.elements.iter().zip(self.masses.iter().copied())
    }

    /// `q(ϑ) = Σ_{j : T_j ∋ ϑ} m(T_j)`.
    pub fn q(&self, x: f64) -> f64 {
        self.focal().filter(|(t, _)| t.contains(x)).map(|(_, m)| m).sum()
    }

    fn q_limit(&self, x: f64, side: Side) -> f64 {
        self.focal()
            .filter(|(t, _)| match side {
                Side::Left => t.covers_left_of(x),
                Side::Right => t.covers_right_of(x),
            })
            .map(|(_, m)| m)
            .sum()
    }

    /// All finite focal-element endpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.elements.iter().flat_map(|t| t.endpoints()).collect();
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.dedup();
        b
    }

    /// Range of the finite breakpoints, if any.
    pub fn finite_hull(&self) -> Option<(f64, f64)> {
        let b = self.breakpoints();
        Some((*b.first()?, *b.last()?))
    }

    pub fn contour(&self) -> Contour {
        let bounds = match self.finite_hull() {
            Some((lo, hi)) => (lo - 0.5, hi + 0.5),
            None => (-1.0, 1.0),
        };
        let me = self.clone();
        let lim = self.clone();
        Contour::new(
            1,
            vec![bounds],
            Shape::Piecewise {
                breakpoints: self.breakpoints(),
                mode: None,
            },
            move |p| me.q(p[0]),
        )
        .with_limit(move |x, s| lim.q_limit(x, s))
    }

    /// `Q̄(A) = Σ_{T ∩ A ≠ ∅} m(T)`.
    pub fn upper_prob(&self, a: &IntervalSet) -> f64 {
        self.focal().filter(|(t, _)| t.intersects(a)).map(|(_, m)| m).sum()
    }
}

fn scalar_set(a: &Assertion) -> Result<IntervalSet> {
    a.as_interval_set().ok_or(Error::DimensionMismatch {
        expected: 1,
        actual: a.dim(),
    })
}

impl UpperProbability for FocalPrior {
    fn dim(&self) -> usize {
        1
    }

    fn upper(&self, a: &Assertion) -> Result<f64> {
        Ok(self.upper_prob(&scalar_set(a)?))
    }
}

/// "I'm 100(1 − β)% sure that θ ∈ [a, b]."
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalPrior {
    pub a: f64,
    pub b: f64,
    pub beta: f64,
}

impl IntervalPrior {
    pub fn new(a: f64, b: f64, beta: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a > b {
            return Err(Error::invalid(format!("interval prior needs finite a <= b, got [{a}, {b}]")));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::invalid(format!("beta must lie in [0, 1], got {beta}")));
        }
        Ok(IntervalPrior { a, b, beta })
    }

    /// `{[a, b] : 1 − β, ℝ : β}`, dropping zero-mass elements.
    pub fn to_focal(&self) -> FocalPrior {
        let mut pairs = Vec::new();
        if self.beta < 1.0 {
            pairs.push((IntervalSet::from_interval(Interval::closed(self.a, self.b)), 1.0 - self.beta));
        }
        if self.beta > 0.0 {
            pairs.push((IntervalSet::real_line(), self.beta));
        }
        FocalPrior::new(pairs).expect("interval prior is a valid focal prior")
    }

    /// `q(ϑ) = β + (1 − β) 1{ϑ ∈ [a, b]}`.
    pub fn q(&self, x: f64) -> f64 {
        if x >= self.a && x <= self.b {
            1.0
        } else {
            self.beta
        }
    }

    pub fn contour(&self) -> Contour {
        let p = *self;
        Contour::new(
            1,
            vec![(self.a - 0.5, self.b + 0.5)],
            Shape::Piecewise {
                breakpoints: vec![self.a, self.b],
                mode: None,
            },
            move |t| p.q(t[0]),
        )
        .with_limit(move |x, s| {
            let inside = match s {
                Side::Left => x > p.a && x <= p.b,
                Side::Right => x >= p.a && x < p.b,
            };
            if inside {
                1.0
            } else {
                p.beta
            }
        })
    }

    /// Three-case upper probability: 0 for ∅, 1 when A meets [a, b], β otherwise.
    pub fn upper_prob(&self, a: &IntervalSet) -> f64 {
        if a.is_empty() {
            0.0
        } else if a.intersects(&IntervalSet::from_interval(Interval::closed(self.a, self.b))) {
            1.0
        } else {
            self.beta
        }
    }

    /// `Q* = β δ_{atom} + (1 − β) Unif(a, b)`.
    pub fn compatible(&self, atom: f64) -> CompatiblePrior {
        CompatiblePrior::AtomUniform {
            atom,
            atom_weight: self.beta,
            lo: self.a,
            hi: self.b,
        }
    }
}

impl UpperProbability for IntervalPrior {
    fn dim(&self) -> usize {
        1
    }

    fn upper(&self, a: &Assertion) -> Result<f64> {
        Ok(self.upper_prob(&scalar_set(a)?))
    }
}

/// Number of exactly non-zero coordinates.
pub fn l0_norm(p: &[f64]) -> usize {
    p.iter().filter(|x| **x != 0.0).count()
}

/// `q(ϑ) = 1 − F_{d,ϖ}(‖ϑ‖₀ − 1)` with `F` the Bin(d, ϖ) distribution function.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsityPrior {
    dim: usize,
    varpi: f64,
    levels: Vec<f64>,
}

impl SparsityPrior {
    pub fn new(dim: usize, varpi: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("sparsity prior dimension must be at least 1"));
        }
        if !(varpi > 0.0 && varpi < 1.0) {
            return Err(Error::invalid(format!("varpi must lie in (0, 1), got {varpi}")));
        }
        let levels = (0..=dim)
            .map(|k| Ok(1.0 - binom_cdf(k as i64 - 1, dim as u64, varpi)?))
            .collect::<Result<Vec<f64>>>()?;
        Ok(SparsityPrior { dim, varpi, levels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn varpi(&self) -> f64 {
        self.varpi
    }

    /// `q_k` for `k = 0, …, dim`.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn q(&self, p: &[f64]) -> f64 {
        self.levels[l0_norm(p)]
    }

    pub fn contour(&self) -> Contour {
        let me = self.clone();
        Contour::new(
            self.dim,
            vec![(-1.0, 1.0); self.dim],
            Shape::General {
                breakpoints: vec![vec![0.0]; self.dim],
            },
            move |p| me.q(p),
        )
    }
}

/// A precise `N(mean, var)` prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalPrior {
    pub mean: f64,
    pub var: f64,
}

impl NormalPrior {
    pub fn new(mean: f64, var: f64) -> Result<Self> {
        if !mean.is_finite() || !(var > 0.0) || !var.is_finite() {
            return Err(Error::invalid(format!("normal prior needs finite mean and var > 0, got ({mean}, {var})")));
        }
        Ok(NormalPrior { mean, var })
    }
}

/// Finite credal set of conjugate normal priors.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteCredalSet {
    priors: Vec<NormalPrior>,
}

impl FiniteCredalSet {
    pub fn new(priors: Vec<NormalPrior>) -> Result<Self> {
        if priors.is_empty() {
            return Err(Error::invalid("credal set must be non-empty"));
        }
        Ok(FiniteCredalSet { priors })
    }

    pub fn priors(&self) -> &[NormalPrior] {
        &self.priors
    }
}

/// One concrete prior distribution for simulating `Θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompatiblePrior {
    /// `w δ_{atom} + (1 − w) Unif(lo, hi)`.
    AtomUniform {
        atom: f64,
        atom_weight: f64,
        lo: f64,
        hi: f64,
    },
    Normal(NormalPrior),
    Uniform { lo: f64, hi: f64 },
    Point(f64),
}

impl CompatiblePrior {
    pub fn sample_scalar(&self, rng: &mut Stream) -> f64 {
        match *self {
            CompatiblePrior::AtomUniform {
                atom,
                atom_weight,
                lo,
                hi,
            } => {
                // Two independent uniforms keep the branch and the location
                // decoupled.
                let u: f64 = rng.random();
                let v: f64 = rng.random();
                if u < atom_weight {
                    atom
                } else {
                    lo + (hi - lo) * v
                }
            }
            CompatiblePrior::Normal(p) => {
                let z: f64 = rng.sample(StandardNormal);
                p.mean + p.var.sqrt() * z
            }
            CompatiblePrior::Uniform { lo, hi } => {
                let v: f64 = rng.random();
                lo + (hi - lo) * v
            }
            CompatiblePrior::Point(x) => x,
        }
    }

    pub fn sample(&self, rng: &mut Stream) -> ParamPoint {
        ParamPoint::scalar(self.sample_scalar(rng))
    }

    /// Probability of an interval assertion under this prior.
    pub fn prob(&self, a: &IntervalSet) -> f64 {
        use crate::numerics::std_normal_cdf;
        let uniform_mass = |lo: f64, hi: f64| {
            let u = IntervalSet::from_interval(Interval::closed(lo, hi));
            if hi > lo {
                a.intersect(&u).measure() / (hi - lo)
            } else if a.contains(lo) {
                1.0
            } else {
                0.0
            }
        };
        match *self {
            CompatiblePrior::AtomUniform {
                atom,
                atom_weight,
                lo,
                hi,
            } => {
                atom_weight * if a.contains(atom) { 1.0 } else { 0.0 }
                    + (1.0 - atom_weight) * uniform_mass(lo, hi)
            }
            CompatiblePrior::Normal(p) => {
                let sd = p.var.sqrt();
                a.parts()
                    .iter()
                    .map(|iv| std_normal_cdf((iv.hi - p.mean) / sd) - std_normal_cdf((iv.lo - p.mean) / sd))
                    .sum()
            }
            CompatiblePrior::Uniform { lo, hi } => uniform_mass(lo, hi),
            CompatiblePrior::Point(x) => {
                if a.contains(x) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Prior specification as accepted on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum PriorSpec {
    Interval(IntervalPrior),
    Sparsity(SparsityPrior),
    Credal(FiniteCredalSet),
}

fn parse_f64(input: &str, tok: &str) -> Result<f64> {
    tok.trim()
        .parse::<f64>()
        .map_err(|_| Error::parse(input, format!("`{tok}` is not a number")))
}

impl FromStr for PriorSpec {
    type Err = Error;

    /// `interval:a,b,beta` | `sparsity:dim,varpi` | `credal:m1,v1;m2,v2;…`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(s, "expected kind:arguments"))?;
        match kind.trim() {
            "interval" => {
                let v: Vec<&str> = body.split(',').collect();
                if v.len() != 3 {
                    return Err(Error::parse(s, "interval prior takes a,b,beta"));
                }
                Ok(PriorSpec::Interval(IntervalPrior::new(
                    parse_f64(s, v[0])?,
                    parse_f64(s, v[1])?,
                    parse_f64(s, v[2])?,
                )?))
            }
            "sparsity" => {
                let v: Vec<&str> = body.split(',').collect();
                if v.len() != 2 {
                    return Err(Error::parse(s, "sparsity prior takes dim,varpi"));
                }
                let dim: usize = v[0]
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(s, "dimension must be a positive integer"))?;
                Ok(PriorSpec::Sparsity(SparsityPrior::new(dim, parse_f64(s, v[1])?)?))
            }
            "credal" => {
                let priors = body
                    .split(';')
                    .filter(|t| !t.trim().is_empty())
                    .map(|pair| {
                        let (m, v) = pair
                            .split_once(',')
                            .ok_or_else(|| Error::parse(s, "credal members are mean,var"))?;
                        NormalPrior::new(parse_f64(s, m)?, parse_f64(s, v)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(PriorSpec::Credal(FiniteCredalSet::new(priors)?))
            }
            other => Err(Error::parse(s, format!("unknown prior kind `{other}`"))),
        }
    }
}

fn parse_list(input: &str, body: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let v = body.split(',').map(|t| parse_f64(input, t)).collect::<Result<Vec<_>>>()?;
    if v.len() != n {
        return Err(Error::parse(input, format!("{what} takes {n} numbers")));
    }
    Ok(v)
}

impl FromStr for CompatiblePrior {
    type Err = Error;

    /// `atom:x,w,lo,hi` | `normal:mean,var` | `uniform:lo,hi` | `point:x`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(s, "expected kind:arguments"))?;
        let q = match kind.trim() {
            "atom" => {
                let v = parse_list(s, body, 4, "atom")?;
                if !(0.0..=1.0).contains(&v[1]) || v[3] < v[2] {
                    return Err(Error::parse(s, "need 0 ≤ w ≤ 1 and lo ≤ hi"));
                }
                CompatiblePrior::AtomUniform {
                    atom: v[0],
                    atom_weight: v[1],
                    lo: v[2],
                    hi: v[3],
                }
            }
            "normal" => {
                let v = parse_list(s, body, 2, "normal")?;
                CompatiblePrior::Normal(NormalPrior::new(v[0], v[1])?)
            }
            "uniform" => {
                let v = parse_list(s, body, 2, "uniform")?;
                if v[1] < v[0] {
                    return Err(Error::parse(s, "need lo ≤ hi"));
                }
                CompatiblePrior::Uniform { lo: v[0], hi: v[1] }
            }
            "point" => CompatiblePrior::Point(parse_list(s, body, 1, "point")?[0]),
            other => return Err(Error::parse(s, format!("unknown sampling prior `{other}`"))),
        };
        Ok(q)
    }
}
