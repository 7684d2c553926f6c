//! Known values for the bundled fixtures and the `selftest` that checks
//! them.

use multispinal::action::{agrees_on_cylinder, decide_germ, find_nonhausdorff_witness, WitnessBounds};
use multispinal::linalg::Rational;
use multispinal::measure::solve_psi;
use multispinal::simplicity::{analyze, AnalysisOptions, Verdict};
use multispinal::{fixtures, Agent, EventuallyPeriodicWord, GermVerdict, MultispinalInstance};
use num_bigint::BigInt;

/// What a fixture is known to produce.
pub struct Expected {
    pub fixture: &'static str,
    pub hom_letters: &'static [&'static str],
    pub psi: &'static [(&'static str, i64, i64)],
    pub scale: i64,
    pub matrix: &'static [&'static [i64]],
    pub scaled_determinant: &'static str,
    pub verdict: Verdict,
}

pub const GRIGORCHUK: Expected = Expected {
    fixture: "grigorchuk",
    hom_letters: &["0"],
    psi: &[("b", 1, 7), ("c", 2, 7), ("d", 4, 7)],
    scale: 7,
    matrix: &[&[7, 1, 2, 4], &[1, 7, 4, 2], &[2, 4, 7, 1], &[4, 2, 1, 7]],
    scaled_determinant: "896",
    verdict: Verdict::Simple,
};

pub const NONSIMPLE_VARIANT: Expected = Expected {
    fixture: "nonsimple-variant",
    hom_letters: &["0"],
    psi: &[("b", 1, 3), ("c", 0, 1), ("d", 2, 3)],
    scale: 3,
    matrix: &[&[3, 1, 0, 2], &[1, 3, 2, 0], &[0, 2, 3, 1], &[2, 0, 1, 3]],
    scaled_determinant: "0",
    verdict: Verdict::NotSimple,
};

pub const Z3_SQUARED: Expected = Expected {
    fixture: "z3-squared",
    hom_letters: &["2"],
    psi: &[("a1", 4, 7), ("a2", 1, 14), ("a3", 1, 7), ("a4", 3, 14)],
    scale: 14,
    matrix: &[
        &[14, 1, 8, 2, 3, 1, 8, 2, 3],
        &[1, 14, 3, 8, 2, 1, 2, 3, 8],
        &[8, 3, 14, 1, 1, 2, 8, 3, 2],
        &[2, 8, 1, 14, 1, 3, 3, 2, 8],
        &[3, 2, 1, 1, 14, 8, 2, 8, 3],
        &[1, 1, 2, 3, 8, 14, 3, 8, 2],
        &[8, 2, 8, 3, 2, 3, 14, 1, 1],
        &[2, 3, 3, 2, 8, 8, 1, 14, 1],
        &[3, 8, 2, 8, 3, 2, 1, 1, 14],
    ],
    scaled_determinant: "634894848",
    verdict: Verdict::Simple,
};

pub const ALL: [&Expected; 3] = [&GRIGORCHUK, &NONSIMPLE_VARIANT, &Z3_SQUARED];

pub fn instance(fixture: &str) -> MultispinalInstance {
    match fixture {
        "grigorchuk" => fixtures::grigorchuk(),
        "nonsimple-variant" => fixtures::nonsimple_variant(),
        "z3-squared" => fixtures::z3_squared(),
        other => panic!("no bundled fixture {other:?}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn record<T: std::fmt::Debug + PartialEq>(out: &mut Vec<Check>, name: String, expected: T, actual: T) {
    let passed = expected == actual;
    let detail = if passed { format!("{actual:?}") } else { format!("expected {expected:?}, got {actual:?}") };
    out.push(Check { name, passed, detail });
}

fn fail(out: &mut Vec<Check>, name: String, err: impl std::fmt::Display) {
    out.push(Check { name, passed: false, detail: err.to_string() });
}

/// Every reference value for one fixture.
pub fn check_fixture(e: &Expected) -> Vec<Check> {
    let mut out = Vec::new();
    let inst = instance(e.fixture);
    let f = e.fixture;

    let hom: Vec<&str> = inst.hom_letters().iter().map(|&y| inst.alphabet()[y].as_str()).collect();
    record(&mut out, format!("{f}: Y"), e.hom_letters.to_vec(), hom);

    match solve_psi(&inst) {
        Ok(table) => {
            for &(label, p, q) in e.psi {
                let actual = inst.group_a().index_of(label).map(|g| table.value(g).clone());
                let expected = Rational::new(p.into(), q.into());
                record(&mut out, format!("{f}: ψ({label})"), Some(expected), actual);
            }
        }
        Err(err) => fail(&mut out, format!("{f}: ψ"), err),
    }

    let report =
        match analyze(&inst, &AnalysisOptions { truncation_depth: None, witness_bounds: None, record_timing: false }) {
            Ok(r) => r,
            Err(err) => {
                fail(&mut out, format!("{f}: analysis"), err);
                return out;
            }
        };
    record(&mut out, format!("{f}: scale"), BigInt::from(e.scale), report.scale.clone());
    let matrix: Vec<Vec<BigInt>> = e.matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let matches = matrix == report.scaled_matrix;
    out.push(Check {
        name: format!("{f}: scaled Gram matrix"),
        passed: matches,
        detail: if matches { format!("{0}×{0} entrywise", matrix.len()) } else { "entries differ".into() },
    });
    record(
        &mut out,
        format!("{f}: scaled determinant"),
        e.scaled_determinant.to_string(),
        report.scaled_determinant.to_string(),
    );
    record(&mut out, format!("{f}: verdict"), e.verdict, report.verdict);
    record(&mut out, format!("{f}: Kirchberg"), e.verdict == Verdict::Simple, report.kirchberg);
    out
}

/// The facts about the Grigorchuk fixture beyond its matrix.
pub fn check_grigorchuk_dynamics() -> Vec<Check> {
    let mut out = Vec::new();
    let inst = fixtures::grigorchuk();
    let d = inst.agent_by_label("d").expect("d is an agent");
    let ones = EventuallyPeriodicWord::periodic(vec![1]).expect("nonempty period");
    record(
        &mut out,
        "grigorchuk: germ of d at 1^∞".into(),
        Ok(GermVerdict::DifferentGerm),
        decide_germ(&inst, d, Agent::Identity, &ones),
    );
    let cylinder = inst.parse_word("1110").expect("binary word");
    record(
        &mut out,
        "grigorchuk: d = e on 1110X^ω".into(),
        Ok(true),
        agrees_on_cylinder(&inst, d, Agent::Identity, &cylinder),
    );
    record(&mut out, "grigorchuk: nucleus size".into(), 5, inst.nucleus().len());
    let witness = find_nonhausdorff_witness(&inst, WitnessBounds::default()).map(|w| {
        (inst.agent_label(w.agent).to_string(), inst.format_word(&w.period), inst.alphabet()[w.escape].clone())
    });
    record(&mut out, "grigorchuk: non-Hausdorff witness".into(), Some(("d".into(), "1".into(), "0".into())), witness);
    out
}

/// All reference checks, in a fixed order.
pub fn selftest() -> Vec<Check> {
    let mut out: Vec<Check> = ALL.iter().flat_map(|e| check_fixture(e)).collect();
    out.extend(check_grigorchuk_dynamics());
    out
}
