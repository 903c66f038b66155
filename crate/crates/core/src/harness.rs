//! Family sweeps, threshold bisection and randomized audits against ppt.

use std::f64::consts::FRAC_PI_4;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{
    applicable_criteria, evaluate, BatteryConfig, CriterionId, CriterionVerdict, StateInput,
    Verdict,
};
use crate::error::{Error, Result};
use crate::linalg::BipartiteDims;
use crate::states::{
    bell_diagonal, pure_schmidt_angle, random_mixed, random_pure, random_separable, rho_p_family,
    werner,
};

/// Bisection resolution used by [`threshold_bisect`] and sweep estimates.
pub const TOL_P: f64 = 1e-6;

pub const CSV_HEADER: &str = "family,parameter,criterion,statistic,threshold,verdict";

/// One-parameter state families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// p·|Φ⁺⟩⟨Φ⁺| + (1−p)·I/4, p ∈ [0, 1].
    Werner,
    /// p·|00⟩⟨00| + (1−p)·|ψ⁺⟩⟨ψ⁺|, p ∈ [0, 1].
    RhoP,
    /// Bell-diagonal state with correlation diagonal x·direction.
    BellDiagonal { direction: [f64; 3] },
    /// cos θ|00⟩ + sin θ|11⟩, θ ∈ [0, π/4].
    PureSchmidtAngle,
}

impl Family {
    /// Direction used by the plain `bell_diagonal` name: the Φ⁺ corner.
    pub const BELL_PHI_PLUS_DIRECTION: [f64; 3] = [1.0, -1.0, 1.0];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Werner => "werner",
            Family::RhoP => "rho_p",
            Family::BellDiagonal { .. } => "bell_diagonal",
            Family::PureSchmidtAngle => "pure_schmidt_angle",
        }
    }

    /// Full parameter interval.
    pub fn range(&self) -> (f64, f64) {
        match self {
            Family::PureSchmidtAngle => (0.0, FRAC_PI_4),
            _ => (0.0, 1.0),
        }
    }

    pub fn state(&self, x: f64) -> Result<StateInput> {
        let (lo, hi) = self.range();
        if !(lo..=hi).contains(&x) {
            return Err(Error::OutOfRange {
                name: "parameter",
                value: x,
            });
        }
        Ok(match self {
            Family::Werner => StateInput::Mixed(werner(x)?),
            Family::RhoP => StateInput::Mixed(rho_p_family(x)?),
            Family::BellDiagonal { direction } => {
                let t = direction.map(|d| d * x);
                // Outside the tetrahedron the composition is not PSD.
                StateInput::Mixed(bell_diagonal(t).map_err(|_| Error::OutOfRange {
                    name: "parameter",
                    value: x,
                })?)
            }
            Family::PureSchmidtAngle => StateInput::Pure(pure_schmidt_angle(x)?),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Accepts `werner`, `rho_p`, `pure_schmidt_angle`, `bell_diagonal` and
/// `bell_diagonal:tx,ty,tz`.
impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "werner" => return Ok(Family::Werner),
            "rho_p" => return Ok(Family::RhoP),
            "pure_schmidt_angle" => return Ok(Family::PureSchmidtAngle),
            "bell_diagonal" => {
                return Ok(Family::BellDiagonal {
                    direction: Family::BELL_PHI_PLUS_DIRECTION,
                })
            }
            _ => {}
        }
        let Some(rest) = s.strip_prefix("bell_diagonal:") else {
            return Err(Error::UnknownFamily(s.to_string()));
        };
        let parts: Vec<f64> = rest
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::UnknownFamily(s.to_string()))?;
        match parts[..] {
            [x, y, z] if parts.iter().all(|v| v.is_finite()) => Ok(Family::BellDiagonal {
                direction: [x, y, z],
            }),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

/// Parameter grid: `steps` evenly spaced points or an explicit list.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Range { start: f64, stop: f64, steps: usize },
    List(Vec<f64>),
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::Range { start, stop, steps } => match steps {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n)
                    .map(|k| {
                        if k + 1 == *n {
                            *stop
                        } else {
                            start + (stop - start) * k as f64 / (n - 1) as f64
                        }
                    })
                    .collect(),
            },
            Grid::List(v) => v.clone(),
        }
    }
}

/// `start:stop:steps` or a comma-separated list.
impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGrid(s.to_string());
        let num = |t: &str| -> Result<f64> {
            let v: f64 = t.trim().parse().map_err(|_| bad())?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(bad())
            }
        };
        let grid = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let [start, stop, steps] = parts[..] else {
                return Err(bad());
            };
            let steps: usize = steps.trim().parse().map_err(|_| bad())?;
            Grid::Range {
                start: num(start)?,
                stop: num(stop)?,
                steps,
            }
        } else {
            Grid::List(s.split(',').map(num).collect::<Result<_>>()?)
        };
        if grid.points().is_empty() {
            return Err(bad());
        }
        Ok(grid)
    }
}

/// A family together with the grid it is swept over.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub grid: Grid,
}

impl FamilySpec {
    /// Checks every grid point lies in the family's valid range.
    pub fn validate(&self) -> Result<()> {
        for x in self.grid.points() {
            self.family.state(x)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub parameter: f64,
    pub criterion: CriterionId,
    pub statistic: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Estimated parameter where the verdict switches, for criteria whose
    /// Entangled flag changes exactly once along the grid.
    pub thresholds: Vec<(CriterionId, f64)>,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.family,
                fmt_sig(r.parameter),
                r.criterion,
                fmt_sig(r.statistic),
                fmt_sig(r.threshold),
                r.verdict
            );
        }
        out
    }

    pub fn threshold(&self, id: CriterionId) -> Option<f64> {
        self.thresholds
            .iter()
            .find(|(c, _)| *c == id)
            .map(|(_, p)| *p)
    }
}

/// Renders `x` with 12 significant digits, trailing zeros dropped.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}").to_lowercase();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn default_criteria(spec: &FamilySpec) -> Result<Vec<CriterionId>> {
    let (lo, _) = spec.family.range();
    Ok(applicable_criteria(&spec.family.state(lo)?))
}

fn flag(family: &Family, id: CriterionId, x: f64, config: &BatteryConfig) -> Result<bool> {
    Ok(evaluate(id, &family.state(x)?, config)?.is_entangled())
}

/// Bisects on [lo, hi] whose endpoints have different Entangled flags.
fn bisect(
    family: &Family,
    id: CriterionId,
    (mut lo, mut hi): (f64, f64),
    tol_p: f64,
    config: &BatteryConfig,
) -> Result<f64> {
    let lo_flag = flag(family, id, lo, config)?;
    while hi - lo > tol_p {
        let mid = 0.5 * (lo + hi);
        if flag(family, id, mid, config)? == lo_flag {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Evaluates every criterion (default: all applicable) at every grid point.
pub fn sweep(
    spec: &FamilySpec,
    criteria: &[CriterionId],
    config: &BatteryConfig,
) -> Result<SweepReport> {
    spec.validate()?;
    let criteria = if criteria.is_empty() {
        default_criteria(spec)?
    } else {
        criteria.to_vec()
    };
    let points = spec.grid.points();
    let per_point: Vec<Vec<CriterionVerdict>> = points
        .par_iter()
        .map(|&x| {
            let state = spec.family.state(x)?;
            criteria
                .iter()
                .map(|&id| evaluate(id, &state, config))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(points.len() * criteria.len());
    for (&x, verdicts) in points.iter().zip(&per_point) {
        for v in verdicts {
            rows.push(SweepRow {
                family: spec.family.name().to_string(),
                parameter: x,
                criterion: v.criterion,
                statistic: v.statistic,
                threshold: v.threshold,
                verdict: v.verdict,
            });
        }
    }

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].total_cmp(&points[j]));
    let mut thresholds = Vec::new();
    for (c, &id) in criteria.iter().enumerate() {
        let flags: Vec<bool> = order
            .iter()
            .map(|&i| per_point[i][c].is_entangled())
            .collect();
        let changes: Vec<usize> = (1..flags.len()).filter(|&k| flags[k] != flags[k - 1]).collect();
        if let [k] = changes[..] {
            let bracket = (points[order[k - 1]], points[order[k]]);
            thresholds.push((id, bisect(&spec.family, id, bracket, TOL_P, config)?));
        }
    }
    Ok(SweepReport { rows, thresholds })
}

/// Parameter at which `criterion` starts or stops flagging entanglement,
/// located to within `tol_p` over the family's full range.
///
/// The caller asserts the verdict is monotone along the family.
pub fn threshold_bisect(
    family: &Family,
    criterion: CriterionId,
    tol_p: f64,
    config: &BatteryConfig,
) -> Result<f64> {
    if tol_p.is_nan() || tol_p <= 0.0 {
        return Err(Error::OutOfRange {
            name: "tol_p",
            value: tol_p,
        });
    }
    let (lo, hi) = family.range();
    if flag(family, criterion, lo, config)? == flag(family, criterion, hi, config)? {
        return Err(Error::NoCrossing { lo, hi });
    }
    bisect(family, criterion, (lo, hi), tol_p, config)
}

/// Random-state source for [`audit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// Mixtures of 1 to 8 random product pure states.
    Separable,
    /// GG†/Tr with G Gaussian, ranks cycling through 1..=dA·dB.
    Mixed,
    /// Haar-random pure states.
    Pure,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Separable => "separable",
            Generator::Mixed => "mixed",
            Generator::Pure => "pure",
        }
    }

    fn sample(&self, dims: BipartiteDims, index: usize, seed: u64) -> Result<StateInput> {
        Ok(match self {
            Generator::Separable => {
                StateInput::Mixed(random_separable(dims, 1 + index % 8, seed)?)
            }
            Generator::Mixed => {
                StateInput::Mixed(random_mixed(dims, 1 + index % dims.total(), seed)?)
            }
            Generator::Pure => StateInput::Pure(random_pure(dims, seed)),
        })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "separable" => Ok(Generator::Separable),
            "mixed" => Ok(Generator::Mixed),
            "pure" => Ok(Generator::Pure),
            other => Err(Error::InvalidGrid(format!("unknown generator '{other}'"))),
        }
    }
}

/// Confusion counts of one criterion against the reference labels.
///
/// "Positive" means an Entangled verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AuditRow {
    pub criterion: CriterionId,
    pub true_positive: usize,
    pub false_positive: usize,
    pub true_negative: usize,
    pub false_negative: usize,
}

impl AuditRow {
    pub fn samples(&self) -> usize {
        self.true_positive + self.false_positive + self.true_negative + self.false_negative
    }

    pub fn detections(&self) -> usize {
        self.true_positive + self.false_positive
    }

    pub fn agreement(&self) -> f64 {
        (self.true_positive + self.true_negative) as f64 / self.samples() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditSummary {
    pub generator: String,
    pub dims: [usize; 2],
    pub samples: usize,
    pub seed: u64,
    /// Number of samples labelled entangled.
    pub entangled: usize,
    pub rows: Vec<AuditRow>,
}

impl AuditSummary {
    pub fn row(&self, id: CriterionId) -> Option<&AuditRow> {
        self.rows.iter().find(|r| r.criterion == id)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "criterion,samples,true_positive,false_positive,true_negative,false_negative,agreement\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.criterion,
                r.samples(),
                r.true_positive,
                r.false_positive,
                r.true_negative,
                r.false_negative,
                fmt_sig(r.agreement())
            );
        }
        out
    }
}

/// Runs `criteria` (default: all applicable) on `n` random states.
///
/// States from the separable generator are labelled separable by
/// construction; otherwise the ppt verdict is the label, which restricts
/// audits to 2×2 and 2×3.
pub fn audit(
    n: usize,
    seed: u64,
    generator: Generator,
    dims: BipartiteDims,
    criteria: &[CriterionId],
    config: &BatteryConfig,
) -> Result<AuditSummary> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            value: 0.0,
        });
    }
    if !dims.ppt_is_exact() {
        return Err(Error::UnsupportedDims {
            da: dims.da(),
            db: dims.db(),
            reason: "audits are labelled by ppt, which is exact only at 2x2 and 2x3",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..n).map(|_| rng.random()).collect();
    let criteria = if criteria.is_empty() {
        applicable_criteria(&generator.sample(dims, 0, seeds[0])?)
    } else {
        criteria.to_vec()
    };

    let outcomes: Vec<(bool, Vec<bool>)> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let state = generator.sample(dims, i, s)?;
            let label = match generator {
                Generator::Separable => false,
                _ => evaluate(CriterionId::Ppt, &state, config)?.is_entangled(),
            };
            let flags = criteria
                .iter()
                .map(|&id| Ok(evaluate(id, &state, config)?.is_entangled()))
                .collect::<Result<Vec<_>>>()?;
            Ok((label, flags))
        })
        .collect::<Result<_>>()?;

    let mut rows: Vec<AuditRow> = criteria
        .iter()
        .map(|&criterion| AuditRow {
            criterion,
            true_positive: 0,
            false_positive: 0,
            true_negative: 0,
            false_negative: 0,
        })
        .collect();
    for (label, flags) in &outcomes {
        for (row, &flagged) in rows.iter_mut().zip(flags) {
            match (label, flagged) {
                (true, true) => row.true_positive += 1,
                (false, true) => row.false_positive += 1,
                (false, false) => row.true_negative += 1,
                (true, false) => row.false_negative += 1,
            }
        }
    }
    Ok(AuditSummary {
        generator: generator.name().to_string(),
        dims: [dims.da(), dims.db()],
        samples: n,
        seed,
        entangled: outcomes.iter().filter(|(l, _)| *l).count(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(v: &[f64]) -> Grid {
        Grid::List(v.to_vec())
    }

    #[test]
    fn fmt_sig_examples() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-0.25), "-0.25");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(2.0 * 2f64.sqrt()), "2.82842712475");
        assert_eq!(fmt_sig(1e-7), "1e-7");
        assert_eq!(fmt_sig(-1.5e-10), "-1.5e-10");
        assert_eq!(fmt_sig(123456789012.0), "123456789012");
        assert_eq!(fmt_sig(1e12), "1e12");
        assert_eq!(fmt_sig(0.99999999999999), "1");
        assert_eq!(fmt_sig(f64::NAN), "nan");
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(
            "0:1:3".parse::<Grid>().unwrap().points(),
            vec![0.0, 0.5, 1.0]
        );
        assert_eq!("0.2".parse::<Grid>().unwrap().points(), vec![0.2]);
        assert_eq!(
            "0, 0.5,1".parse::<Grid>().unwrap().points(),
            vec![0.0, 0.5, 1.0]
        );
        for bad in ["", "0:1", "0:1:0", "a,b", "0:1:x", "nan", "0:1:2:3"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn family_parsing() {
        assert_eq!("werner".parse::<Family>().unwrap(), Family::Werner);
        assert_eq!(
            "bell_diagonal:-1,-1,-1".parse::<Family>().unwrap(),
            Family::BellDiagonal {
                direction: [-1.0, -1.0, -1.0]
            }
        );
        assert!("bell_diagonal:1,2".parse::<Family>().is_err());
        assert!(matches!(
            "wernr".parse::<Family>(),
            Err(Error::UnknownFamily(_))
        ));
    }

    #[test]
    fn grid_outside_range_is_rejected() {
        let config = BatteryConfig::default();
        for (family, x) in [
            (Family::Werner, 1.5),
            (Family::RhoP, -0.1),
            (Family::PureSchmidtAngle, 1.0),
            (
                Family::BellDiagonal {
                    direction: [1.0, 1.0, 1.0],
                },
                0.5,
            ),
        ] {
            let spec = FamilySpec {
                family,
                grid: list(&[x]),
            };
            assert!(
                matches!(
                    sweep(&spec, &[CriterionId::Ppt], &config),
                    Err(Error::OutOfRange { .. })
                ),
                "{family} {x}"
            );
        }
    }

    #[test]
    fn werner_ppt_sweep() {
        let spec = FamilySpec {
            family: Family::Werner,
            grid: list(&[0.0, 0.5, 1.0]),
        };
        let report = sweep(&spec, &[CriterionId::Ppt], &BatteryConfig::default()).unwrap();
        let verdicts: Vec<Verdict> = report.rows.iter().map(|r| r.verdict).collect();
        assert_eq!(
            verdicts,
            vec![Verdict::Separable, Verdict::Entangled, Verdict::Entangled]
        );
        let p = report.threshold(CriterionId::Ppt).unwrap();
        assert!((p - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn rho_p_at_one_is_inconclusive_for_ccnr() {
        let spec = FamilySpec {
            family: Family::RhoP,
            grid: list(&[1.0]),
        };
        let report = sweep(&spec, &[CriterionId::Ccnr], &BatteryConfig::default()).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert!((report.rows[0].statistic - 1.0).abs() < 1e-9);
        assert_eq!(report.rows[0].verdict, Verdict::Inconclusive);
    }

    #[test]
    fn maximally_mixed_has_no_detections() {
        let spec = FamilySpec {
            family: Family::Werner,
            grid: list(&[0.0]),
        };
        let report = sweep(&spec, &[], &BatteryConfig::default()).unwrap();
        assert!(report.rows.len() >= 10);
        assert!(report.rows.iter().all(|r| r.verdict != Verdict::Entangled));
    }

    #[test]
    fn pure_family_routes_pure_criteria() {
        let spec = FamilySpec {
            family: Family::PureSchmidtAngle,
            grid: "0:0.785:5".parse().unwrap(),
        };
        let report = sweep(&spec, &[], &BatteryConfig::default()).unwrap();
        assert!(report
            .rows
            .iter()
            .any(|r| r.criterion == CriterionId::SchmidtRank));
        // Entropy grows with θ on [0, π/4].
        let entropy: Vec<f64> = report
            .rows
            .iter()
            .filter(|r| r.criterion == CriterionId::Entropy)
            .map(|r| r.statistic)
            .collect();
        assert!(entropy.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sweep_csv_layout_and_determinism() {
        let spec = FamilySpec {
            family: Family::Werner,
            grid: "0:1:5".parse().unwrap(),
        };
        let ids = [CriterionId::Ppt, CriterionId::ChshOptimize];
        let config = BatteryConfig::default();
        let a = sweep(&spec, &ids, &config).unwrap().to_csv();
        let b = sweep(&spec, &ids, &config).unwrap().to_csv();
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 1 + 5 * 2);
        assert_eq!(lines[1], "werner,0,ppt,0.25,0,Separable");
        assert!(lines[3].starts_with("werner,0.25,ppt,"));
    }

    #[test]
    fn bisection_errors() {
        let config = BatteryConfig::default();
        assert!(matches!(
            threshold_bisect(&Family::Werner, CriterionId::Witness, TOL_P, &config),
            Err(Error::NoCrossing { .. })
        ));
        assert!(threshold_bisect(&Family::Werner, CriterionId::Ppt, 0.0, &config).is_err());
    }

    #[test]
    fn werner_reduction_and_concurrence_thresholds() {
        let config = BatteryConfig::default();
        for id in [CriterionId::Reduction, CriterionId::Concurrence] {
            let p = threshold_bisect(&Family::Werner, id, TOL_P, &config).unwrap();
            assert!((p - 1.0 / 3.0).abs() <= TOL_P, "{id}: {p}");
        }
    }

    #[test]
    fn bell_diagonal_singlet_direction_detected_by_witness() {
        let family = Family::BellDiagonal {
            direction: [-1.0, -1.0, -1.0],
        };
        let p = threshold_bisect(&family, CriterionId::Witness, TOL_P, &BatteryConfig::default())
            .unwrap();
        assert!((p - 1.0 / 3.0).abs() <= TOL_P);
    }

    #[test]
    fn audit_refuses_unlabelled_dims() {
        let dims = BipartiteDims::new(3, 3).unwrap();
        assert!(matches!(
            audit(5, 0, Generator::Mixed, dims, &[], &BatteryConfig::default()),
            Err(Error::UnsupportedDims { .. })
        ));
    }

    #[test]
    fn small_audits_are_sound_and_deterministic() {
        let config = BatteryConfig::default();
        let dims = BipartiteDims::QUBITS;
        let sep = audit(200, 1, Generator::Separable, dims, &[], &config).unwrap();
        assert!(sep.rows.iter().all(|r| r.false_positive == 0), "{sep:?}");

        let mixed = audit(200, 2, Generator::Mixed, dims, &[], &config).unwrap();
        let ppt_rate = mixed.row(CriterionId::Ppt).unwrap().detections();
        assert_eq!(ppt_rate, mixed.entangled);
        for row in &mixed.rows {
            assert_eq!(row.false_positive, 0, "{:?}", row.criterion);
            assert!(row.detections() <= ppt_rate);
        }
        assert_eq!(mixed.row(CriterionId::Concurrence).unwrap().agreement(), 1.0);
        assert_eq!(
            mixed,
            audit(200, 2, Generator::Mixed, dims, &[], &config).unwrap()
        );

        let pure = audit(100, 3, Generator::Pure, dims, &[], &config).unwrap();
        assert_eq!(pure.row(CriterionId::SchmidtRank).unwrap().agreement(), 1.0);

        let qutrit = BipartiteDims::new(2, 3).unwrap();
        let q = audit(100, 4, Generator::Mixed, qutrit, &[], &config).unwrap();
        assert_eq!(q.row(CriterionId::Reduction).unwrap().agreement(), 1.0);
    }
}
