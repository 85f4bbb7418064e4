//! Command implementations for the `rank3` binary.
//!
//! Every command produces an ordered list of JSON records; each record
//! carries an `identity` field naming the checked identity, so scripted
//! consumers can gate on specific checks. Output is deterministic for a
//! fixed configuration (timings are all-zero unless `--timings` is set).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use rank3_core::groebner::{lattice_sum_identity, CountMode};
use rank3_core::invariants::{
    adjunction_check, alexander_u3, blowup_factor, elliptic_coefficients, framed_euler_char,
    pair_coefficient_factorization, structure_series, verify_blowup, AlexMode, AlexPoly,
    BlowupShift, DonaldsonSpec, EulerMode, FinAbGroup,
};
use rank3_core::mumford::{
    verify_beta_lemma, verify_beta_sq_lemma, verify_index_recursions, RelationFamily,
};
use rank3_core::spectrum::{eigenvalue_set, evaction, simple_type_census, DeformedModule};
use rank3_core::{Error, Rat};

#[derive(Parser, Debug)]
#[command(
    name = "rank3",
    about = "Exact verification pipelines for rank-3 relation families, eigenvalue lattices and Donaldson-type series",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,

    /// Report real elapsed milliseconds (off by default so that equal
    /// configurations produce byte-identical output).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Args)]
pub struct GenusRange {
    /// Genus or genus range, e.g. `2` or `1..4` (inclusive).
    #[arg(long, default_value = "1..3", value_parser = parse_range)]
    pub g: (u32, u32),
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit tables of the relation polynomials and their duals.
    Relations {
        #[command(flatten)]
        range: GenusRange,
        /// Largest relation index m.
        #[arg(long, default_value_t = 6)]
        m_max: u32,
        /// Rank N.
        #[arg(long, default_value_t = 3)]
        n: u8,
        /// Degree offset d' (1 <= d' < N).
        #[arg(long, default_value_t = 1)]
        dprime: u8,
    },
    /// Standard-monomial census of the relation ideal per genus.
    Dimension {
        #[command(flatten)]
        range: GenusRange,
        /// Starting window of relation indices past the threshold.
        #[arg(long, default_value_t = 4)]
        window: u32,
    },
    /// Enumerate the eigenvalue set for a genus and admissible degree.
    Spectrum {
        /// Genus.
        #[arg(long, default_value_t = 1)]
        g: u32,
        /// Bundle degree, coprime to 3.
        #[arg(long, default_value_t = 1)]
        d: i64,
    },
    /// Structure/blowup/elliptic series checks.
    Series {
        /// Which family of checks to run.
        #[arg(long, value_enum, default_value_t = SeriesCheck::All)]
        check: SeriesCheck,
        /// Series truncation order.
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Largest genus for the elliptic expansion.
        #[arg(long, default_value_t = 4)]
        g_max: u32,
        /// Optional JSON file with a basic-class spec (q, classes, coeffs, w).
        #[arg(long)]
        input: Option<std::path::PathBuf>,
        /// Per-class invariants for the conjectural pair-coefficient
        /// factorization annotation, comma separated rationals.
        #[arg(long, value_delimiter = ',')]
        sw: Option<Vec<String>>,
    },
    /// Framed Euler characteristics by both counting modes.
    Euler {
        /// Cyclic orders of the first homology, comma separated (e.g. `2,4`).
        #[arg(long, value_delimiter = ',', default_value = "2")]
        group: Vec<u64>,
        /// Rank N.
        #[arg(long = "N", default_value_t = 3)]
        n: u32,
    },
    /// Two-variable Alexander coefficients by both modes.
    Alexander {
        /// Symmetric coefficients A_0,A_1,...,A_r, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "1",
            conflicts_with = "input"
        )]
        delta: Vec<i64>,
        /// JSON file holding the coefficient array [A_0, A_1, ...].
        #[arg(long)]
        input: Option<std::path::PathBuf>,
    },
    /// Run every verification pipeline; exit nonzero on any failure.
    VerifyAll {
        /// Largest genus for the heavyweight checks.
        #[arg(long, default_value_t = 3)]
        g_max: u32,
        /// Series truncation order for the blowup identity.
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesCheck {
    Structure,
    Blowup,
    Elliptic,
    All,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a
            .trim()
            .parse()
            .map_err(|e| format!("bad range start: {e}"))?;
        let b: u32 = b
            .trim()
            .parse()
            .map_err(|e| format!("bad range end: {e}"))?;
        if a > b {
            return Err(format!("empty range {a}..{b}"));
        }
        Ok((a, b))
    } else {
        let g: u32 = s.trim().parse().map_err(|e| format!("bad genus: {e}"))?;
        Ok((g, g))
    }
}

/// Result of one command run: ordered records plus an overall pass flag.
pub struct RunOutput {
    pub records: Vec<Value>,
    pub all_pass: bool,
}

pub fn run_command(cmd: &Command, timings: bool) -> Result<RunOutput, Error> {
    match cmd {
        Command::Relations {
            range,
            m_max,
            n,
            dprime,
        } => relations(range.g, *m_max, *n, *dprime),
        Command::Dimension { range, window } => dimension(range.g, *window, timings),
        Command::Spectrum { g, d } => spectrum_cmd(*g, *d),
        Command::Series {
            check,
            order,
            g_max,
            input,
            sw,
        } => series_cmd(*check, *order, *g_max, input.as_deref(), sw.as_deref()),
        Command::Euler { group, n } => euler_cmd(group, *n),
        Command::Alexander { delta, input } => {
            let half = match input {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(|e| {
                        Error::InvalidParameter(format!("cannot read {}: {e}", path.display()))
                    })?;
                    serde_json::from_str::<Vec<i64>>(&text)
                        .map_err(|e| Error::InvalidParameter(format!("bad delta JSON: {e}")))?
                }
                None => delta.clone(),
            };
            alexander_cmd(&half)
        }
        Command::VerifyAll { g_max, order } => verify_all(*g_max, *order, timings),
    }
}

fn relations((g_lo, g_hi): (u32, u32), m_max: u32, n: u8, dprime: u8) -> Result<RunOutput, Error> {
    let mut records = Vec::new();
    for g in g_lo..=g_hi {
        for k in 0..=g {
            for dual in [false, true] {
                let fam = RelationFamily::compute(g, k, n, dprime, dual, m_max as usize)?;
                for m in 0..=m_max {
                    records.push(json!({
                        "identity": "relation-family-value",
                        "g": g,
                        "k": k,
                        "m": m,
                        "dual": dual,
                        "polynomial": fam.value(m as i64).to_string(),
                    }));
                }
            }
        }
    }
    Ok(RunOutput {
        records,
        all_pass: true,
    })
}

fn dimension((g_lo, g_hi): (u32, u32), window: u32, timings: bool) -> Result<RunOutput, Error> {
    let mut records = Vec::new();
    let mut all = true;
    for g in g_lo..=g_hi {
        let t0 = Instant::now();
        let report = simple_type_census(g, window)?;
        let elapsed = if timings {
            t0.elapsed().as_millis() as u64
        } else {
            0
        };
        all &= report.matched && report.census == report.expected;
        records.push(json!({
            "identity": "dimension-census",
            "g": g,
            "window_used": report.window_used,
            "standard_monomial_count": report.census,
            "expected": report.expected,
            "match": report.census == report.expected,
            "eigenvalue_count": report.eigenvalue_count,
            "elapsed_ms": elapsed,
        }));
    }
    Ok(RunOutput {
        records,
        all_pass: all,
    })
}

fn spectrum_cmd(g: u32, d: i64) -> Result<RunOutput, Error> {
    let set = eigenvalue_set(g, d)?;
    let records = set
        .iter()
        .map(|t| {
            json!({
                "identity": "eigenvalue-tuple",
                "g": g,
                "d": d,
                "tuple": t.components(),
            })
        })
        .collect();
    Ok(RunOutput {
        records,
        all_pass: true,
    })
}

fn load_spec(path: Option<&std::path::Path>) -> Result<DonaldsonSpec, Error> {
    match path {
        None => Ok(DonaldsonSpec::k3()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| {
                Error::InvalidParameter(format!("cannot read {}: {e}", p.display()))
            })?;
            serde_json::from_str(&text)
                .map_err(|e| Error::InvalidParameter(format!("bad spec JSON: {e}")))
        }
    }
}

fn series_cmd(
    check: SeriesCheck,
    order: usize,
    g_max: u32,
    input: Option<&std::path::Path>,
    sw: Option<&[String]>,
) -> Result<RunOutput, Error> {
    let mut records = Vec::new();
    let mut all = true;
    let spec = load_spec(input)?;
    spec.validate()?;
    let gamma: Vec<Rat> = (0..spec.rank())
        .map(|i| Rat::from_int(1 + (i % 2) as i64))
        .collect();
    let lambda: Vec<Rat> = (0..spec.rank())
        .map(|i| Rat::from_int(1 - (i % 2) as i64))
        .collect();

    if matches!(check, SeriesCheck::Structure | SeriesCheck::All) {
        // conjugation symmetry: negating w flips t3
        let plus = structure_series(&spec, &gamma, &lambda, order)?;
        let mut negated = spec.clone();
        negated.w = spec.w.iter().map(|x| -x).collect();
        let minus = structure_series(&negated, &gamma, &lambda, order)?;
        let ok = rank3_core::invariants::flip_t3(&minus) == plus;
        all &= ok;
        records.push(json!({
            "identity": "structure-series-conjugation-symmetry",
            "order": order,
            "pass": ok,
        }));

        // adjunction samples
        for (genus, self_int, pairing, expected) in
            [(1i64, 0i64, 0i64, true), (0, 0, 0, false), (3, 0, 4, true)]
        {
            let got = adjunction_check(genus, self_int, pairing)?;
            all &= got == expected;
            records.push(json!({
                "identity": "adjunction-inequality",
                "genus": genus,
                "self_int": self_int,
                "pairing": pairing,
                "holds": got,
                "pass": got == expected,
            }));
        }
    }

    if matches!(check, SeriesCheck::Blowup | SeriesCheck::All) {
        let rep = verify_blowup(&spec, &gamma, &lambda, order)?;
        all &= rep.all_pass();
        let factor = blowup_factor(BlowupShift::Plain, 2);
        records.push(json!({
            "identity": "blowup-factor-identity",
            "order": order,
            "plain_pass": rep.plain_ok,
            "through_e_pass": rep.through_e_ok,
            "factor_constant_term": factor.coeff(0).coeff(0),
        }));
    }

    if let Some(sw) = sw {
        let s: Vec<Rat> = sw
            .iter()
            .map(|t| t.parse::<Rat>())
            .collect::<Result<_, _>>()?;
        for check in pair_coefficient_factorization(&spec, &s)? {
            records.push(json!({
                "identity": "pair-coefficient-factorization",
                "i": check.i,
                "j": check.j,
                "expected": check.expected,
                "actual": check.actual,
                "matches": check.matches,
                "conjectural": true,
                // annotation only: conjecture mismatches never fail the run
                "pass": true,
            }));
        }
    }

    if matches!(check, SeriesCheck::Elliptic | SeriesCheck::All) {
        for g in 1..=g_max {
            for wf in 0..3u8 {
                let e = elliptic_coefficients(g, wf)?;
                let corner = &e.corner;
                records.push(json!({
                    "identity": "elliptic-expansion-support",
                    "g": g,
                    "wf": wf,
                    "nonzero_coefficients": e.coeffs.len(),
                    "corner_computed": corner.computed,
                    "corner_candidate_two_thirds": corner.candidate_two_thirds,
                    "corner_candidate_one_third": corner.candidate_one_third,
                    "corner_matches_two_thirds": corner.matches_two_thirds,
                    "corner_matches_one_third": corner.matches_one_third,
                    "pass": true,
                }));
            }
        }
    }

    Ok(RunOutput {
        records,
        all_pass: all,
    })
}

fn euler_cmd(group: &[u64], n: u32) -> Result<RunOutput, Error> {
    let h = FinAbGroup::new(group.to_vec())?;
    let direct = framed_euler_char(&h, n, EulerMode::Direct)?;
    let orbit = framed_euler_char(&h, n, EulerMode::OrbitFormula)?;
    let ok = direct == orbit;
    Ok(RunOutput {
        records: vec![json!({
            "identity": "framed-euler-characteristic",
            "group": group,
            "n": n,
            "direct": direct,
            "orbit_formula": orbit,
            "match": ok,
        })],
        all_pass: ok,
    })
}

fn alexander_cmd(delta: &[i64]) -> Result<RunOutput, Error> {
    let poly = AlexPoly::from_half(delta)?;
    let prod = alexander_u3(&poly, AlexMode::Product);
    let rule = alexander_u3(&poly, AlexMode::CoefficientRule);
    let ok = prod == rule;
    let coefficients: Vec<Value> = prod
        .iter()
        .map(|(&(a, b), &c)| json!({"a": a, "b": b, "c": c}))
        .collect();
    Ok(RunOutput {
        records: vec![json!({
            "identity": "alexander-two-variable-product",
            "delta_half": delta,
            "modes_agree": ok,
            "coefficients": coefficients,
        })],
        all_pass: ok,
    })
}

fn verify_all(g_max: u32, order: usize, timings: bool) -> Result<RunOutput, Error> {
    let mut records = Vec::new();
    let mut all = true;
    let mut push = |name: &str, pass: bool, detail: Value| {
        all &= pass;
        let mut obj = Map::new();
        obj.insert("identity".into(), Value::String(name.into()));
        obj.insert("pass".into(), Value::Bool(pass));
        obj.insert("detail".into(), detail);
        records.push(Value::Object(obj));
    };

    // dimension censuses
    for g in 1..=g_max {
        let report = simple_type_census(g, 4)?;
        push(
            "dimension-census",
            report.census == report.expected && report.matched,
            json!({"g": g, "census": report.census, "expected": report.expected}),
        );
    }

    // cross-method relation equality + index recursions
    for g in 1..=g_max.min(3) {
        for k in 0..=g {
            let m_max = (3 * g + 4) as usize;
            for dual in [false, true] {
                let ok = RelationFamily::compute(g, k, 3, 1, dual, m_max).is_ok();
                push(
                    "relation-cross-method-equality",
                    ok,
                    json!({"g": g, "k": k, "dual": dual, "m_max": m_max}),
                );
            }
            let rep = verify_index_recursions(g, k, 3, 1, false, (3 * g + 2) as usize)?;
            push(
                "relation-index-recursions",
                rep.all_pass,
                json!({"g": g, "k": k}),
            );
        }
    }

    // beta lemmas: the squared membership needs k >= 1, the linear one
    // holds for every k; also pin the k = 0 counterexample.
    for g in 1..=g_max.min(2) {
        for k in 0..=g {
            for m in 0..=(3 * g + 2) as i64 {
                if k >= 1 {
                    let rep = verify_beta_sq_lemma(g, k, m, 3)?;
                    push(
                        "beta-squared-membership",
                        rep.all_pass,
                        json!({"g": g, "k": k, "m": m}),
                    );
                }
                let rep = verify_beta_lemma(g, k, m, 3)?;
                push(
                    "beta-linear-membership",
                    rep.all_pass,
                    json!({"g": g, "k": k, "m": m}),
                );
            }
        }
        let counterexample = verify_beta_sq_lemma(g, 0, 1, 3)?;
        push(
            "beta-squared-membership-k0-counterexample",
            counterexample.checks.iter().all(|c| !c.holds),
            json!({"g": g, "k": 0, "m": 1, "expected": "membership fails"}),
        );
    }

    // lattice count agreement
    let lattice_ok =
        (0..=200).all(|n| lattice_count_agree(n)) && (1..=20).all(|g| lattice_sum_identity(g));
    push(
        "lattice-count-closed-form",
        lattice_ok,
        json!({"n_max": 200, "g_max": 20}),
    );

    // spectrum
    for g in 1..=g_max.max(4) {
        let set = eigenvalue_set(g, 1)?;
        let expected = 3 * (2 * g as u64 - 1) * (2 * g as u64 - 1);
        let size_ok = set.len() as u64 == expected;
        let set_lookup: std::collections::HashSet<_> = set.iter().cloned().collect();
        let closed = (0..6).all(|idx| {
            set.iter()
                .all(|t| set_lookup.contains(&evaction(t, 3, idx).unwrap()))
        });
        push(
            "eigenvalue-set-size-and-action",
            size_ok && closed,
            json!({"g": g, "size": set.len(), "expected": expected}),
        );
    }
    let annih = DeformedModule::new(1, 2, -1)?.annihilator_check(6)?;
    push("deformed-module-annihilator", annih, json!({"order": 6}));

    // blowup identity
    let spec = DonaldsonSpec::k3();
    let gamma = vec![Rat::from_int(1), Rat::from_int(1)];
    let lambda = vec![Rat::from_int(1), Rat::from_int(-2)];
    let rep = verify_blowup(&spec, &gamma, &lambda, order)?;
    push(
        "blowup-factor-identity",
        rep.all_pass(),
        json!({"order": order, "spec": "k3"}),
    );

    // euler characteristics
    let mut euler_ok = true;
    for orders in [vec![1], vec![2], vec![3], vec![2, 2], vec![6], vec![2, 4]] {
        let h = FinAbGroup::new(orders)?;
        for n in 2..=4 {
            euler_ok &= framed_euler_char(&h, n, EulerMode::Direct)?
                == framed_euler_char(&h, n, EulerMode::OrbitFormula)?;
        }
    }
    push(
        "framed-euler-characteristic",
        euler_ok,
        json!({"n": [2, 3, 4]}),
    );

    // alexander
    let mut alex_ok = true;
    for poly in [
        AlexPoly::unknot(),
        AlexPoly::trefoil(),
        AlexPoly::figure_eight(),
    ] {
        alex_ok &= alexander_u3(&poly, AlexMode::Product)
            == alexander_u3(&poly, AlexMode::CoefficientRule);
    }
    push("alexander-two-variable-product", alex_ok, json!({}));

    // elliptic support/parity
    let mut elliptic_ok = true;
    for g in 1..=g_max.max(4) {
        for wf in 0..3u8 {
            elliptic_ok &= elliptic_coefficients(g, wf).is_ok();
        }
    }
    push(
        "elliptic-expansion-support",
        elliptic_ok,
        json!({"g_max": g_max.max(4)}),
    );

    let _ = timings;
    Ok(RunOutput {
        records,
        all_pass: all,
    })
}

fn lattice_count_agree(n: u32) -> bool {
    lattice_count_pair(n).0 == lattice_count_pair(n).1
}

fn lattice_count_pair(n: u32) -> (u64, u64) {
    (
        rank3_core::groebner::lattice_count(n, CountMode::ClosedForm),
        rank3_core::groebner::lattice_count(n, CountMode::BruteForce),
    )
}

/// Flatten one record into dotted keys with scalar string values (CycNum
/// arrays become one column per rational coordinate).
fn flatten(prefix: &str, v: &Value, out: &mut BTreeMap<String, String>) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, val, out);
            }
        }
        Value::Array(items) => {
            for (i, val) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), val, out);
            }
        }
        Value::Null => {
            out.insert(prefix.to_string(), String::new());
        }
        Value::Bool(b) => {
            out.insert(prefix.to_string(), b.to_string());
        }
        Value::Number(n) => {
            out.insert(prefix.to_string(), n.to_string());
        }
        Value::String(s) => {
            out.insert(prefix.to_string(), s.clone());
        }
    }
}

pub fn render(records: &[Value], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records).expect("serializable records");
            s.push('\n');
            s
        }
        Format::Csv => {
            let flat: Vec<BTreeMap<String, String>> = records
                .iter()
                .map(|r| {
                    let mut m = BTreeMap::new();
                    flatten("", r, &mut m);
                    m
                })
                .collect();
            let mut headers: Vec<String> = Vec::new();
            for row in &flat {
                for k in row.keys() {
                    if !headers.contains(k) {
                        headers.push(k.clone());
                    }
                }
            }
            headers.sort();
            let mut s = String::new();
            let _ = writeln!(s, "{}", headers.join(","));
            for row in &flat {
                let line: Vec<String> = headers
                    .iter()
                    .map(|h| {
                        let cell = row.get(h).cloned().unwrap_or_default();
                        if cell.contains(',') || cell.contains('"') {
                            format!("\"{}\"", cell.replace('"', "\"\""))
                        } else {
                            cell
                        }
                    })
                    .collect();
                let _ = writeln!(s, "{}", line.join(","));
            }
            s
        }
    }
}

pub fn write_output(cli: &Cli, text: &str) -> io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parser() {
        assert_eq!(parse_range("2").unwrap(), (2, 2));
        assert_eq!(parse_range("1..4").unwrap(), (1, 4));
        assert!(parse_range("4..1").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn csv_flattens_cyc_components() {
        let rec = json!({"identity": "x", "tuple": [["1", "0", "-1/2", "0"]]});
        let out = render(&[rec], Format::Csv);
        let mut lines = out.lines();
        assert_eq!(
            lines.next().unwrap(),
            "identity,tuple.0.0,tuple.0.1,tuple.0.2,tuple.0.3"
        );
        assert_eq!(lines.next().unwrap(), "x,1,0,-1/2,0");
    }

    #[test]
    fn euler_command_record() {
        let out = euler_cmd(&[2], 3).unwrap();
        assert!(out.all_pass);
        assert_eq!(out.records[0]["direct"], json!(4));
    }
}
