use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use semifree::classify::{
    classify_poly_with, classify_rational, classify_series, Classification, DetectorOutcome, DetectorRegistry, Verdict,
};
use semifree::field::{nth_root_or_request, Field, NthRoot};
use semifree::poly::chebyshev;
use semifree::semigroup::{search_relations_with, verify_relation, KeyStrategyRegistry, Relation, SearchOptions};
use semifree::series::{boettcher, Point};
use semifree::text::{parse_constant, parse_expression, parse_polynomial, parse_series, Expression};

#[derive(Parser)]
#[command(name = "semifree", version, about = "Decide whether two maps generate a free semigroup under composition")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Coefficient field: Q, Q(zeta:k), GF(p), GF(p^e:c0,...,ce), optionally followed by [t^d=value].
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a pair of polynomials or rational functions.
    Classify {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        /// Common fixed point used for rational functions: `inf` or a field element.
        #[arg(long, default_value = "inf")]
        beta: String,
        #[arg(long, default_value_t = 32)]
        precision: usize,
        /// Comma-separated detector names, tried in order.
        #[arg(long, value_delimiter = ',')]
        detector: Vec<String>,
    },
    /// Run every detector separately and report each outcome.
    Detect {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Search for relations among words up to a degree bound.
    Relations {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Word keying strategy: auto, modular or exact.
        #[arg(long, default_value = "auto")]
        keying: String,
        /// Stop after this many relations.
        #[arg(long)]
        max: Option<usize>,
    },
    /// Check a relation `LHS = RHS` between words in F and G exactly.
    Verify {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        lhs: String,
        rhs: String,
    },
    /// Böttcher coordinate of a series with lowest degree at least 2.
    Boettcher {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 16)]
        precision: usize,
    },
    /// The Chebyshev polynomial of degree m.
    Chebyshev { m: u64 },
    /// Classify a pair of power series; append `+ O(X^k)` to mark truncation.
    SeriesClassify {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 32)]
        precision: usize,
    },
}

struct Failure {
    code: u8,
    payload: Value,
}

fn input_error(msg: impl std::fmt::Display) -> Failure {
    Failure { code: 1, payload: json!({ "error": msg.to_string() }) }
}

struct Inputs {
    lines: Option<Vec<String>>,
    next: usize,
}

impl Inputs {
    fn resolve(&mut self, raw: &str) -> Result<String, Failure> {
        if raw != "-" {
            return Ok(raw.to_string());
        }
        if self.lines.is_none() {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(input_error)?;
            self.lines = Some(buf.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect());
        }
        let lines = self.lines.as_ref().expect("read above");
        let line = lines.get(self.next).cloned().ok_or_else(|| input_error("not enough lines on stdin"))?;
        self.next += 1;
        Ok(line)
    }
}

fn classification_outcome(c: &Classification) -> (u8, Value, String) {
    let code = if c.verdict == Verdict::NeedsExtension { 2 } else { 0 };
    (code, serde_json::to_value(c).expect("serializable"), c.to_string())
}

fn run(cli: &Cli) -> Result<(u8, Value, String), Failure> {
    let field: Field = cli.common.field.parse().map_err(input_error)?;
    let mut inputs = Inputs { lines: None, next: 0 };
    let poly = |s: &str| parse_polynomial(s, &field).map_err(input_error);
    match &cli.command {
        Command::Classify { f, g, beta, precision, detector } => {
            let (f, g) = (inputs.resolve(f)?, inputs.resolve(g)?);
            let ef = parse_expression(&f, &field).map_err(input_error)?;
            let eg = parse_expression(&g, &field).map_err(input_error)?;
            let c = match (&ef, &eg) {
                (Expression::Polynomial(pf), Expression::Polynomial(pg)) if beta == "inf" => {
                    let all = DetectorRegistry::default();
                    let reg = if detector.is_empty() {
                        all
                    } else {
                        let names: Vec<&str> = detector.iter().map(String::as_str).collect();
                        all.subset(&names).map_err(input_error)?
                    };
                    classify_poly_with(pf, pg, &reg).map_err(input_error)?
                }
                _ => {
                    let point = if beta == "inf" {
                        Point::Infinity
                    } else {
                        Point::Finite(parse_constant(beta, &field).map_err(input_error)?)
                    };
                    classify_rational(&ef.to_rational(), &eg.to_rational(), &point, *precision).map_err(input_error)?
                }
            };
            Ok(classification_outcome(&c))
        }
        Command::Detect { f, g } => {
            let (f, g) = (poly(&inputs.resolve(f)?)?, poly(&inputs.resolve(g)?)?);
            let mut rows = Vec::new();
            let mut text = Vec::new();
            for d in DetectorRegistry::default().detectors() {
                let (status, extra) = match d.detect(&f, &g).map_err(input_error)? {
                    DetectorOutcome::Detected(det) => ("detected", json!({ "witness": det.witness })),
                    DetectorOutcome::Absent => ("absent", json!({})),
                    DetectorOutcome::NeedsExtension(req) => ("needs-extension", json!({ "extension": req.relation() })),
                };
                text.push(format!("{}: {status}", d.name()));
                let mut row = json!({ "detector": d.name(), "outcome": status });
                if let (Value::Object(r), Value::Object(e)) = (&mut row, extra) {
                    r.extend(e);
                }
                rows.push(row);
            }
            Ok((0, json!({ "detectors": rows, "field": field.to_string() }), text.join("\n")))
        }
        Command::Relations { f, g, bound, jobs, keying, max } => {
            let (f, g) = (poly(&inputs.resolve(f)?)?, poly(&inputs.resolve(g)?)?);
            let opts = SearchOptions { bound: *bound, jobs: *jobs, strategy: keying.clone(), max_relations: *max };
            let rep = search_relations_with(&f, &g, &opts, &KeyStrategyRegistry::default()).map_err(input_error)?;
            let text = rep.relations.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
            let value = json!({
                "field": field.to_string(),
                "bound": bound,
                "keying": rep.strategy,
                "words": rep.words,
                "relations": rep.relations,
            });
            Ok((0, value, text))
        }
        Command::Verify { f, g, lhs, rhs } => {
            let (f, g) = (poly(&inputs.resolve(f)?)?, poly(&inputs.resolve(g)?)?);
            let rel = Relation::parse(lhs, rhs, f.deg(), g.deg()).map_err(input_error)?;
            let holds = verify_relation(&rel, &f, &g).map_err(input_error)?;
            let rel = Relation { verified: holds, ..rel };
            Ok((0, json!({ "relation": rel, "holds": holds }), format!("{} = {}: {holds}", rel.lhs, rel.rhs)))
        }
        Command::Boettcher { f, precision } => {
            let s = parse_series(&inputs.resolve(f)?, &field, *precision).map_err(input_error)?;
            let m = s.lowest_degree().ok_or_else(|| input_error("series is zero"))?;
            if m < 2 {
                return Err(input_error(format!("lowest degree {m} is below 2")));
            }
            let inv = s.coeff(m).inv().map_err(input_error)?;
            match nth_root_or_request(&inv, m as u64 - 1).map_err(input_error)? {
                NthRoot::Root(root) => {
                    let l = boettcher(&s, &root).map_err(input_error)?;
                    let value = json!({ "L": l.to_string(), "precision": l.precision(), "field": field.to_string() });
                    Ok((0, value, format!("L = {l}")))
                }
                NthRoot::Request(req) => {
                    let value = json!({ "error": "root not in field", "extension": req.relation(), "field": req.extended_field().to_string() });
                    Ok((2, value, req.to_string()))
                }
            }
        }
        Command::Chebyshev { m } => {
            let t = chebyshev(*m, &field);
            Ok((0, json!({ "m": m, "polynomial": t.to_string() }), t.to_string()))
        }
        Command::SeriesClassify { f, g, precision } => {
            let sf = parse_series(&inputs.resolve(f)?, &field, *precision).map_err(input_error)?;
            let sg = parse_series(&inputs.resolve(g)?, &field, *precision).map_err(input_error)?;
            let c = classify_series(&sf, &sg).map_err(input_error)?;
            Ok(classification_outcome(&c))
        }
    }
}

fn render(value: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value).expect("serializable")
    } else {
        serde_json::to_string(value).expect("serializable")
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((code, value, text)) => {
            match cli.common.output {
                Output::Json => println!("{}", render(&value, cli.common.pretty)),
                Output::Text => println!("{text}"),
            }
            ExitCode::from(code)
        }
        Err(Failure { code, payload }) => {
            match cli.common.output {
                Output::Json => println!("{}", render(&payload, cli.common.pretty)),
                Output::Text => eprintln!("error: {}", payload["error"].as_str().unwrap_or("")),
            }
            ExitCode::from(code)
        }
    }
}
