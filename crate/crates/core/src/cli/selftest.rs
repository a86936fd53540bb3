//! Built-in consistency checks behind the `selftest` subcommand.

use num_traits::Zero;

use crate::basis::{basis_row, basis_row_to, weighted_truncation_index};
use crate::error::Result;
use crate::exact::{exact_central_moment, exact_moment, format_rat, int, moment_kernel, power_sum, rat, to_f64};
use crate::exact::{BigRat, PowerSumQuery};
use crate::moments_paper::{
    case_exemplars, classify_case, mod1_moment_paper, mod2_moment_paper, power_sum_paper,
};
use crate::operators::{corpus, Evaluator, OperatorKind, RationalFn, SequenceSpec};
use crate::quad::{durrmeyer_integral, QuadConfig};

/// Outcome of every check plus informational findings.
#[derive(Debug, Default)]
pub struct Report {
    checks: usize,
    failures: Vec<String>,
    findings: Vec<String>,
}

impl Report {
    fn check(&mut self, name: &str, outcome: Result<bool>) {
        self.checks += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => self.failures.push(name.to_string()),
            Err(e) => self.failures.push(format!("{name} ({e})")),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            out.push_str(&format!("# finding: {f}\n"));
        }
        for f in &self.failures {
            out.push_str(&format!("FAIL {f}\n"));
        }
        if self.passed() {
            out.push_str(&format!("PASS {} checks\n", self.checks));
        } else {
            out.push_str(&format!("FAIL {} of {} checks\n", self.failures.len(), self.checks));
        }
        out
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

fn basis_identities(report: &mut Report) {
    for n in [3u64, 10, 40] {
        for x in [0.0, 0.3, 1.0, 2.5] {
            report.check(&format!("basis mass n={n} x={x}"), basis_row(n, x, 1e-16).map(|r| close(r.sum(), 1.0, 1e-13)));
            let collapse = (|| {
                let big = basis_row_to(n + 1, x, 200)?;
                let small = basis_row_to(n, x, 200)?;
                Ok((0..150i64).all(|k| {
                    let lhs = (1.0 + x) * big.at(k) - x * big.at(k - 1);
                    let scale = (1.0 + x) * big.at(k) + x * big.at(k - 1);
                    (lhs - small.at(k)).abs() <= 1e-13 * scale.max(f64::MIN_POSITIVE)
                }))
            })();
            report.check(&format!("basis collapse n={n} x={x}"), collapse);
        }
    }
}

fn quadrature_vs_kernel(report: &mut Report) {
    let cfg = QuadConfig { abs_tol: 1e-14, rel_tol: 1e-12, max_depth: 40 };
    for n in [10u64, 30] {
        for k in [0u64, 3, 17] {
            for j in 0..=4usize {
                let outcome = (|| {
                    let numeric = durrmeyer_integral(n, k, |t| t.powi(j as i32), &cfg)?.value;
                    let exact = to_f64(&moment_kernel(n, k, j)?);
                    Ok(close(numeric, exact, 1e-10))
                })();
                report.check(&format!("quadrature n={n} k={k} j={j}"), outcome);
            }
        }
    }
}

/// `sum_j p_{m,j}(x) (j + r)^s` in floating point, independent of the oracle.
fn float_power_sum(m: u64, shift: u64, s: usize, x: f64) -> Result<f64> {
    let growth = |k: u64| ((k + shift + 1) as f64).powi(s as i32);
    let last = weighted_truncation_index(m, x, 1e-18, growth)?;
    let row = basis_row_to(m, x, last)?;
    Ok(row.values.iter().enumerate().map(|(j, p)| p * ((j as u64 + shift) as f64).powi(s as i32)).sum())
}

fn power_sums(report: &mut Report) {
    for n in [4u64, 10] {
        for x in [rat(1, 4), int(1), int(2)] {
            for shift in 0..=1u64 {
                for s in 1..=4usize {
                    let outcome = (|| {
                        let q = PowerSumQuery { m: n + 1, shift, power: s, x: x.clone() };
                        let exact = power_sum(&q)?;
                        let printed = power_sum_paper(n, shift, s, &x)?;
                        if printed != exact {
                            let finding = format!(
                                "printed power sum r={shift} s={s} differs from exact by {} at n={n} x={}",
                                format_rat(&(&printed - &exact)),
                                format_rat(&x)
                            );
                            report.findings.push(finding);
                        }
                        Ok(close(to_f64(&exact), float_power_sum(n + 1, shift, s, to_f64(&x))?, 1e-11))
                    })();
                    report.check(&format!("power sum n={n} x={} r={shift} s={s}", format_rat(&x)), outcome);
                }
            }
        }
    }
}

fn gating(report: &mut Report) {
    let c = |v: i64| RationalFn::constant(int(v));
    report.check("gating rejects a0=1 a1=0", Ok(SequenceSpec::new(c(1), c(0)).is_err()));
    report.check("gating rejects a0=2 a1=2", Ok(SequenceSpec::new(c(2), c(2)).is_err()));
    let varying = (|| {
        let a0 = RationalFn::new(int(1), int(1), int(0), int(1))?;
        let a1 = RationalFn::new(int(2), int(1), int(0), int(1))?;
        Ok(SequenceSpec::new(a0, a1).is_ok())
    })();
    report.check("gating accepts a0=(n+1)/n a1=(n+2)/n", varying);
}

fn hard_moments(report: &mut Report) {
    let xs = [int(0), rat(1, 4), int(2)];
    for (case, spec) in case_exemplars().into_iter().take(6) {
        let kind = OperatorKind::Mod1(spec.clone());
        for n in [8u64, 20] {
            for x in &xs {
                for j in 0..=2 {
                    let outcome = (|| Ok(mod1_moment_paper(&spec, n, x, j)? == exact_moment(&kind, n, x, j)?))();
                    report.check(&format!("mod1 moment {case} n={n} x={} j={j}", format_rat(x)), outcome);
                }
            }
        }
    }
    for n in [8u64, 20] {
        for x in &xs {
            for j in 0..=2 {
                let outcome = (|| Ok(mod2_moment_paper(n, x, j)? == exact_moment(&OperatorKind::Mod2, n, x, j)?))();
                report.check(&format!("mod2 moment n={n} x={} j={j}", format_rat(x)), outcome);
            }
            let centred = exact_central_moment(&OperatorKind::Mod2, n, x, 1).map(|v| v.is_zero());
            report.check(&format!("mod2 first central moment n={n} x={}", format_rat(x)), centred);
        }
    }
}

fn decomposition(report: &mut Report) {
    let ev = Evaluator::new();
    let spec = SequenceSpec::constant(rat(3, 4), rat(1, 2)).expect("valid pair");
    for f in [corpus::expneg(), corpus::inv1p()] {
        for x in [0.0, 0.5, 1.5] {
            let outcome = (|| {
                let v = ev.apply(&OperatorKind::Mod1(spec.clone()), 20, &f, x, 1e-12)?;
                let a = ev.apply(&OperatorKind::SplitA(spec.clone()), 20, &f, x, 1e-12)?;
                let b = ev.apply(&OperatorKind::SplitB(spec.clone()), 20, &f, x, 1e-12)?;
                Ok((v + a + b).abs() <= 1e-10)
            })();
            report.check(&format!("decomposition f={} x={x}", f.id), outcome);
        }
    }
}

fn classification(report: &mut Report) {
    for (case, spec) in case_exemplars() {
        report.check(&format!("classify {case}"), classify_case(&spec, 10).map(|c| c == case));
    }
    let off = SequenceSpec::unchecked(RationalFn::constant(int(1)), RationalFn::constant(BigRat::zero()));
    report.check("classify violating pair", classify_case(&off, 10).map(|c| c.to_string() == "violates"));
}

pub fn run() -> Report {
    let mut report = Report::default();
    basis_identities(&mut report);
    quadrature_vs_kernel(&mut report);
    power_sums(&mut report);
    gating(&mut report);
    hard_moments(&mut report);
    decomposition(&mut report);
    classification(&mut report);
    report
}
