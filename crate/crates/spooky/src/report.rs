//! Plain-text reports. Numbers print with 12 significant digits, like the
//! figure CSV; JSON artifacts carry full precision.

use std::fmt::Write;

use spooky_core::gpt::{Proposition, Reduction, SharpWitness, StateVector};
use spooky_core::hvt::{
    check_lambda_independence_with_tol, check_outcome_independence_with_tol,
    check_parameter_independence_with_tol, is_descriptively_significant_with_tol, reconstruct,
    HvtModel, OiForm,
};
use spooky_core::quantum::cat::{alive, dead, psi_minus, psi_plus};
use spooky_core::quantum::{CMatrix, C64};
use spooky_core::steering::{ScenarioVerdicts, SteeringCertificate, SweepFamily, SweepReport};
use spooky_core::tables::{
    factorize_with_tol, spooky_verdict_with_tol, Behavior, JointTable, Purity, SpookyVerdict,
};
use spooky_core::{Error, Result};

use crate::figure::{format_sig, SIGNIFICANT_DIGITS};

pub fn num(x: f64) -> String {
    format_sig(x, SIGNIFICANT_DIGITS)
}

pub fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| num(x)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn table(t: &JointTable) -> String {
    let p = t.entries();
    format!("[{}, {}]", vector(&p[0]), vector(&p[1]))
}

fn complex(z: C64) -> String {
    if z.im == 0.0 {
        num(z.re)
    } else if z.re == 0.0 {
        format!("{}i", num(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", num(z.re), num(z.im.abs()))
    }
}

pub fn matrix(m: &CMatrix) -> String {
    let n = m.dim();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let cells: Vec<String> = (0..n).map(|j| complex(m.get(i, j))).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn state_vector(s: &StateVector) -> String {
    vector(&s.coords)
}

pub fn purity(p: Purity) -> &'static str {
    match p {
        Purity::DeclaredPure => "pure",
        Purity::DeclaredMixed => "mixed",
        Purity::Unknown => "unknown",
    }
}

pub fn verdict(v: SpookyVerdict) -> &'static str {
    match v {
        SpookyVerdict::Spooky => "Spooky",
        SpookyVerdict::NotSpookyWitnessed => "NotSpookyWitnessed",
        SpookyVerdict::Inconclusive => "Inconclusive",
    }
}

fn verdict_reason(v: SpookyVerdict) -> &'static str {
    match v {
        SpookyVerdict::Spooky => "non-factorized table from a declared-pure state",
        SpookyVerdict::NotSpookyWitnessed => "the table factorizes",
        SpookyVerdict::Inconclusive => "non-factorized, but the state is not declared pure",
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Names a normalized qubit state when it is one of the cat's pure states.
pub fn cat_state_name(rho: &CMatrix) -> Option<&'static str> {
    if rho.dim() != 2 {
        return None;
    }
    [
        ("alive", alive()),
        ("dead", dead()),
        ("psi+", psi_plus()),
        ("psi-", psi_minus()),
    ]
    .into_iter()
    .find(|(_, k)| rho.max_abs_diff(&CMatrix::outer(k)) <= 1e-9)
    .map(|(name, _)| name)
}

fn named_matrix(m: &CMatrix) -> String {
    match cat_state_name(m) {
        Some(name) => format!("{} ({name})", matrix(m)),
        None => matrix(m),
    }
}

/// Determinant, factorization and verdict for one table.
pub fn spooky_check(t: &JointTable, eps: f64) -> String {
    let mut s = String::new();
    let det = t.determinant();
    writeln!(s, "table {} (purity: {})", table(t), purity(t.purity())).unwrap();
    writeln!(s, "det={}", num(det)).unwrap();
    match factorize_with_tol(t, eps) {
        Some(f) => writeln!(
            s,
            "factorization: q = {}, r = {}",
            vector(&f.q),
            vector(&f.r)
        ),
        None => writeln!(s, "factorization: none, |det| exceeds tolerance {eps:e}"),
    }
    .unwrap();
    let v = spooky_verdict_with_tol(t, eps);
    writeln!(s, "verdict: {} ({})", verdict(v), verdict_reason(v)).unwrap();
    s
}

/// Step-by-step account of a steering certificate: the table, the remote
/// weights, the normalized steered states and both routes to `w`.
pub fn steering_trace<S, E>(
    c: &SteeringCertificate<S, E>,
    state: impl Fn(&S) -> String,
    effect: impl Fn(&E) -> String,
    purity_flag: Purity,
    eps: f64,
) -> String {
    let mut s = String::new();
    let [p0, p1] = c.weights;
    let t = c.source_table.with_purity(purity_flag);
    writeln!(
        s,
        "step 1  table {} (purity: {})",
        table(&t),
        purity(purity_flag)
    )
    .unwrap();
    writeln!(s, "step 2  det = p00 p11 - p01 p10 = {}", num(c.det)).unwrap();
    writeln!(
        s,
        "step 3  remote outcome weights p0 = <e|α̃0> = {}, p1 = <e|α̃1> = {}",
        num(p0),
        num(p1)
    )
    .unwrap();
    writeln!(
        s,
        "step 4  steered states α0 = α̃0/p0 = {}",
        state(&c.steered_states[0])
    )
    .unwrap();
    writeln!(
        s,
        "                       α1 = α̃1/p1 = {}",
        state(&c.steered_states[1])
    )
    .unwrap();
    writeln!(s, "step 5  effect a0 = {}", effect(&c.a0)).unwrap();
    writeln!(s, "step 6  w = <a0|α0> - <a0|α1> = {}", num(c.w)).unwrap();
    writeln!(s, "step 7  det / (p0 p1) = {}", num(c.difference)).unwrap();
    let gap = (c.w - c.difference).abs();
    writeln!(
        s,
        "step 8  routes agree: {} (gap {})",
        yes(gap <= 1e-9),
        num(gap)
    )
    .unwrap();
    writeln!(s, "step 9  p0 p1 w = {} reproduces det", num(p0 * p1 * c.w)).unwrap();
    if c.near_degenerate {
        writeln!(
            s,
            "warning: |det| below 1e-6, the division by p0 p1 is poorly conditioned"
        )
        .unwrap();
    }
    let v = spooky_verdict_with_tol(&t, eps);
    writeln!(s, "verdict: {} ({})", verdict(v), verdict_reason(v)).unwrap();
    s
}

pub fn matrix_trace(c: &SteeringCertificate<CMatrix, CMatrix>, p: Purity, eps: f64) -> String {
    steering_trace(c, named_matrix, matrix, p, eps)
}

pub fn vector_trace(
    c: &SteeringCertificate<StateVector, spooky_core::gpt::EffectVector>,
    p: Purity,
    eps: f64,
) -> String {
    steering_trace(c, state_vector, |a| vector(&a.coords), p, eps)
}

fn tuple_labels(b: &Behavior, x: &[usize]) -> String {
    let shape = b.shape();
    let labels: Vec<&str> = x
        .iter()
        .enumerate()
        .map(|(k, &t)| shape.tests(k)[t].as_str())
        .collect();
    format!("({})", labels.join(", "))
}

/// Equivalence with an optional reference behavior, the three independence
/// predicates and a significance witness.
pub fn hvt_check(m: &HvtModel, reference: Option<&Behavior>, eps: f64) -> String {
    let mut s = String::new();
    let rebuilt = reconstruct(m);
    match reference {
        None => writeln!(s, "equivalence: no reference behavior given"),
        Some(b) => match rebuilt.max_abs_diff(b) {
            None => writeln!(s, "equivalence: no (party/test/outcome structure differs)"),
            Some(d) => writeln!(
                s,
                "equivalence: {} (max deviation {})",
                yes(d <= eps),
                num(d)
            ),
        },
    }
    .unwrap();
    writeln!(
        s,
        "lambda independence: {}",
        yes(check_lambda_independence_with_tol(m, eps))
    )
    .unwrap();
    writeln!(
        s,
        "parameter independence: {}",
        yes(check_parameter_independence_with_tol(m, eps))
    )
    .unwrap();
    let fact = check_outcome_independence_with_tol(m, OiForm::Factorized, eps);
    let cond = check_outcome_independence_with_tol(m, OiForm::Conditional, eps);
    writeln!(
        s,
        "outcome independence: {} (factorized: {}, conditional: {})",
        yes(fact && cond),
        yes(fact),
        yes(cond)
    )
    .unwrap();
    match is_descriptively_significant_with_tol(m, eps) {
        Ok(Some(w)) => {
            let c = &m.conditionals()[w.lambda_a];
            let o: Vec<String> = w.outcomes.iter().map(|v| v.to_string()).collect();
            writeln!(
                s,
                "significance: labels {} and {} differ on tests {} outcomes ({}): {} vs {}",
                m.lambdas()[w.lambda_a],
                m.lambdas()[w.lambda_b],
                tuple_labels(c, &w.tests),
                o.join(", "),
                num(w.value_a),
                num(w.value_b)
            )
        }
        Ok(None) => writeln!(s, "significance: none"),
        Err(Error::NotApplicable(why)) => writeln!(s, "significance: not applicable, {why}"),
        Err(e) => writeln!(s, "significance: {e}"),
    }
    .unwrap();
    s
}

pub fn proposition(p: &Proposition) -> String {
    format!(
        "a0 = {}, a1 = {}",
        vector(&p.a0().coords),
        vector(&p.a1().coords)
    )
}

pub fn sharp_witness(w: Option<&SharpWitness>) -> String {
    match w {
        None => "none".into(),
        Some(w) => {
            let truth: Vec<&str> = w
                .truth
                .iter()
                .map(|&t| if t { "a0" } else { "a1" })
                .collect();
            format!(
                "{} (certain outcomes: {})",
                state_vector(&w.state),
                truth.join(", ")
            )
        }
    }
}

pub fn reduction(r: &Reduction, total: usize) -> String {
    let mut s = String::new();
    let list = |v: &[usize]| -> String {
        let parts: Vec<String> = v.iter().map(|i| i.to_string()).collect();
        format!("{{{}}}", parts.join(", "))
    };
    writeln!(
        s,
        "family of {total} propositions has no common sharp state"
    )
    .unwrap();
    writeln!(
        s,
        "largest jointly sharp subfamily: {} (size {}), outcomes swapped on {}",
        list(&r.phi),
        r.k,
        list(&r.relabeled)
    )
    .unwrap();
    writeln!(s, "averaged proposition: {}", proposition(&r.averaged)).unwrap();
    writeln!(
        s,
        "complementary partner: proposition {}, {}",
        r.l,
        proposition(&r.other)
    )
    .unwrap();
    s
}

pub fn family(f: SweepFamily) -> &'static str {
    match f {
        SweepFamily::Haar => "haar",
        SweepFamily::Product => "product",
        SweepFamily::MaxEntangledAligned => "aligned",
        SweepFamily::Mixed => "mixed",
    }
}

fn divergence(v: &ScenarioVerdicts) -> String {
    format!(
        "divergence at scenario {}: spooky {}, steers {}, nonzero det {}, max |det| {}",
        v.index,
        yes(v.spooky),
        yes(v.steers),
        yes(v.determinant),
        num(v.max_abs_det)
    )
}

pub fn sweep(r: &SweepReport) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "sweep: {} scenarios, seed {}, family {}, {} B-tests per scenario",
        r.samples,
        r.seed,
        family(r.family),
        r.b_tests
    )
    .unwrap();
    writeln!(
        s,
        "spooky: {}  steers a non-trivial ensemble: {}  nonzero det: {}",
        r.counts[0], r.counts[1], r.counts[2]
    )
    .unwrap();
    for v in &r.divergences {
        writeln!(s, "{}", divergence(v)).unwrap();
    }
    writeln!(s, "{} divergences", r.divergences.len()).unwrap();
    s
}

/// Report for the three built-in cat scenarios.
pub fn cat(eps: f64) -> Result<String> {
    use spooky_core::quantum::cat::cat_scenarios;
    use spooky_core::quantum::{born_table, steer, QuantumSystem};
    use spooky_core::steering::{
        discriminable_steering_check, normalize_assemblage, table_to_steering_quantum_with_tol,
    };

    let c = cat_scenarios();
    let mut s = String::new();
    writeln!(s, "v1: a single cat in |psi+>, no partner system").unwrap();
    writeln!(
        s,
        "  tests {{{}, {}}} and {{{}, {}}}: complementary {}",
        c.v1.labels[0][0],
        c.v1.labels[0][1],
        c.v1.labels[1][0],
        c.v1.labels[1][1],
        yes(c.v1.is_complementary()?)
    )
    .unwrap();

    let space = QuantumSystem::new(2);
    for (name, title, sc) in [
        ("v2", "(|alive,up> + |dead,down>)/√2", &c.v2),
        ("v3", "(|alive,up> + |psi+,down>)/√2", &c.v3),
    ] {
        writeln!(s, "{name}: {title}").unwrap();
        let t = born_table(sc)?;
        let v = spooky_verdict_with_tol(&t, eps);
        writeln!(s, "  table {} (purity: {})", table(&t), purity(t.purity())).unwrap();
        writeln!(s, "  det={}  verdict: {}", num(t.determinant()), verdict(v)).unwrap();
        let a = steer(sc)?;
        for (label, el) in sc.labels.b.iter().zip(a.elements()) {
            writeln!(s, "  steered by {label}: {}", matrix(el)).unwrap();
        }
        let n = normalize_assemblage(&space, &a)?;
        let parts: Vec<String> = n
            .ensemble
            .entries()
            .iter()
            .map(|(w, st)| match cat_state_name(st) {
                Some(nm) => format!("{} {nm}", num(*w)),
                None => format!("{} {}", num(*w), matrix(st)),
            })
            .collect();
        writeln!(s, "  ensemble: {}", parts.join(", ")).unwrap();
        let cert = table_to_steering_quantum_with_tol(sc, eps)?;
        writeln!(
            s,
            "  w = <{}|α0> - <{}|α1> = {}, det/(p0 p1) = {}",
            sc.labels.a[0],
            sc.labels.a[0],
            num(cert.w),
            num(cert.difference)
        )
        .unwrap();
        let d = discriminable_steering_check(&space, &n.ensemble, t.purity())?;
        match (&d.discrimination, &d.certificate) {
            (Some((effect, value)), Some(cert)) => writeln!(
                s,
                "  conclusive discrimination of α1 from α0: value {}{}, effect {}; certificate det = {}",
                num(*value),
                if d.perfect { " (perfect)" } else { "" },
                named_matrix(effect),
                num(cert.det)
            ),
            _ => writeln!(s, "  conclusive discrimination: none"),
        }
        .unwrap();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_rendering() {
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(0.25), "0.25");
        assert_eq!(vector(&[1.0, 0.5]), "[1, 0.5]");
    }

    #[test]
    fn complex_rendering() {
        assert_eq!(complex(C64::new(0.5, -0.5)), "0.5-0.5i");
        assert_eq!(complex(C64::new(0.0, 1.0)), "1i");
        assert_eq!(complex(C64::new(2.0, 0.0)), "2");
    }

    #[test]
    fn spooky_check_for_the_entangled_cat() {
        let t = JointTable::new([[0.5, 0.0], [0.0, 0.5]], Purity::DeclaredPure).unwrap();
        let r = spooky_check(&t, 1e-9);
        assert!(r.contains("det=0.25"), "{r}");
        assert!(r.contains("verdict: Spooky"), "{r}");
        assert!(r.contains("factorization: none"), "{r}");
    }

    #[test]
    fn names_cat_states() {
        assert_eq!(cat_state_name(&CMatrix::outer(&psi_plus())), Some("psi+"));
        assert_eq!(cat_state_name(&CMatrix::identity(2).scale(0.5)), None);
    }

    #[test]
    fn cat_report_mentions_every_scenario() {
        let r = cat(1e-9).unwrap();
        for needle in [
            "v1:",
            "v2:",
            "v3:",
            "det=0.25",
            "det=0.125",
            "complementary yes",
        ] {
            assert!(r.contains(needle), "missing {needle}:\n{r}");
        }
    }
}
