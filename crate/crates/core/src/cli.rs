//! Command-line front end: argument definitions, input file formats and the
//! command runners. `main` only parses arguments and prints.
//!
//! Structure-constants files:
//!
//! ```text
//! # comment
//! p 3
//! dim 3
//! names h x+ x-
//! bracket 0 1 -> 0 2 0
//! ```
//!
//! `bracket i j` with i < j also sets [e_j, e_i] = -[e_i, e_j] unless that
//! pair is given explicitly; unlisted pairs are zero.
//!
//! Multiplication-table files hold n rows of n indices in 0..n.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bracket::BracketAlgebra;
use crate::cohom::{
    abelian_cochain, bar_cochain, cohomology, e_lowdeg, periodic_cochain, smith_normal_form, BarCaps, CochainComplex,
    IntegerMatrix, TableGroup, DEFAULT_RANK_CAP,
};
use crate::error::{Error, Result};
use crate::fpla::{PrimeField, DEFAULT_SUBSPACE_CAP};
use crate::group::{closure, frattini_from_generators, BracketGroup};
use crate::verify::{verify_counterexample, VerifyOptions};

#[derive(Parser, Debug)]
#[command(name = "pgroup", version, about = "p-groups from bracket algebras and small integral cohomology")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Worker threads for the parallel sweeps.
    #[arg(long, default_value_t = 1, global = true)]
    pub threads: usize,
    /// Seed for every sampled sweep.
    #[arg(long, default_value_t = 0x5eed, global = true)]
    pub seed: u64,
    /// Cap on materialized group sizes.
    #[arg(long, default_value_t = crate::group::DEFAULT_GROUP_CAP, global = true)]
    pub cap: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// Periodic complex for cyclic groups, tensor complex for abelian ones, bar complex for tables.
    Auto,
    Bar,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every check on G(sl2) over F_p.
    VerifyCounterexample {
        #[arg(long)]
        p: u64,
    },
    /// Integral cohomology with trivial coefficients.
    Cohomology {
        /// cyclic:M, abelian:M1,M2,... or table:FILE
        #[arg(long)]
        group: String,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
    },
    /// Order, exponent, center and Frattini subgroup of G(B).
    GroupInfo {
        #[command(flatten)]
        algebra: AlgebraSource,
    },
    /// Subalgebras of a given dimension.
    Subalgebras {
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Smith normal form of an integer matrix given as "a b; c d".
    Snf {
        #[arg(long)]
        matrix: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct AlgebraSource {
    /// Structure-constants file.
    #[arg(long, conflicts_with = "builtin")]
    pub algebra: Option<PathBuf>,
    /// sl2 or zero:N
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub p: Option<u64>,
}

/// Exit status for an error: 3 for exceeded caps, 2 for everything else.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. } => 3,
        _ => 2,
    }
}

/// What a command produced: text to print and the process exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub status: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, status: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads.max(1))
        .build()
        .map_err(|e| Error::contract(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::VerifyCounterexample { p } => {
            let opts = VerifyOptions { seed: g.seed, group_cap: g.cap, ..VerifyOptions::default() };
            let report = verify_counterexample(*p, &opts)?;
            let mut output = match g.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_string(),
            };
            let status = match report.first_failure() {
                None => 0,
                Some(r) => {
                    if g.format == Format::Text {
                        let _ = write!(output, "first failing check: {}", r.check_id);
                    }
                    1
                }
            };
            Ok(Outcome { output, status })
        }
        Command::Cohomology { group, max_degree, engine } => cmd_cohomology(group, *max_degree, *engine, g.format),
        Command::GroupInfo { algebra } => cmd_group_info(algebra, g),
        Command::Subalgebras { algebra, dim } => {
            let alg = load_algebra(algebra)?;
            let subs = alg.subalgebras_of_dim(*dim, DEFAULT_SUBSPACE_CAP)?;
            let list: Vec<String> = subs.iter().map(|s| s.to_string()).collect();
            Ok(Outcome::ok(match g.format {
                Format::Json => pretty(&json!({ "dim": dim, "count": list.len(), "subalgebras": list })),
                Format::Text => {
                    let mut out = format!("{} subalgebras of dimension {dim}\n", list.len());
                    for s in &list {
                        let _ = writeln!(out, "  {s}");
                    }
                    out
                }
            }))
        }
        Command::Snf { matrix } => {
            let a = parse_matrix(matrix)?;
            let snf = smith_normal_form(&a);
            let diag: Vec<String> = snf.diagonal().iter().map(|d| d.to_string()).collect();
            Ok(Outcome::ok(match g.format {
                Format::Json => pretty(&json!({
                    "diagonal": diag,
                    "u": rows_of(&snf.u),
                    "v": rows_of(&snf.v),
                })),
                Format::Text => format!("diagonal: {}\nU = {:?}\nV = {:?}\n", diag.join(" "), snf.u, snf.v),
            }))
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value")
}

fn rows_of(m: &IntegerMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect()
}

fn cmd_cohomology(descriptor: &str, max_degree: usize, engine: Engine, format: Format) -> Result<Outcome> {
    let complex = complex_for(descriptor, max_degree, engine)?;
    let report = cohomology(&complex)?;
    let e = if max_degree >= 1 { e_lowdeg(&report, max_degree).ok() } else { None };
    let output = match format {
        Format::Json => pretty(&json!({
            "report": report,
            "e_lowdeg": e.as_ref().map(|x| crate::cohom::Natural(x.clone())),
        })),
        Format::Text => {
            let mut out = report.to_string();
            match e {
                Some(e) => {
                    let _ = writeln!(out, "e_lowdeg({max_degree}) = {e}");
                }
                None => {
                    let _ = writeln!(out, "e_lowdeg({max_degree}) undefined");
                }
            }
            out
        }
    };
    Ok(Outcome::ok(output))
}

fn complex_for(descriptor: &str, max_degree: usize, engine: Engine) -> Result<CochainComplex> {
    let parse_err = |msg: String| Error::Parse { line: 0, msg };
    let (kind, arg) = descriptor
        .split_once(':')
        .ok_or_else(|| parse_err(format!("group {descriptor:?} is not cyclic:M, abelian:M1,M2,... or table:FILE")))?;
    let factors = |s: &str| -> Result<Vec<u64>> {
        s.split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| parse_err(format!("bad cyclic factor {x:?}"))))
            .collect()
    };
    match (kind, engine) {
        ("cyclic", Engine::Auto) => {
            let f = factors(arg)?;
            if f.len() != 1 {
                return Err(parse_err(format!("cyclic takes one order, got {arg:?}")));
            }
            periodic_cochain(f[0], max_degree)
        }
        ("abelian", Engine::Auto) => abelian_cochain(&factors(arg)?, max_degree, DEFAULT_RANK_CAP),
        ("cyclic" | "abelian", Engine::Bar) => {
            let f = factors(arg)?;
            let f: Vec<usize> = f.into_iter().map(|m| m as usize).collect();
            bar_cochain(&TableGroup::abelian(&f)?, max_degree, BarCaps::default())
        }
        ("table", _) => {
            let text = read(Path::new(arg))?;
            bar_cochain(&parse_table(&text)?, max_degree, BarCaps::default())
        }
        _ => Err(parse_err(format!("unknown group kind {kind:?}"))),
    }
}

fn cmd_group_info(source: &AlgebraSource, g: &GlobalOpts) -> Result<Outcome> {
    let alg = load_algebra(source)?;
    let group = BracketGroup::new(alg.clone())?;
    let p = group.p();
    let all = closure(&group, &group.basis_lifts(), g.cap)?;
    let exponent = group.exponent(g.cap)?;
    let center = group.center(g.cap)?.len();
    let frattini = frattini_from_generators(&group, &all, p, g.cap)?.order();
    let counts: Vec<usize> = (1..alg.dim())
        .map(|k| alg.subalgebras_of_dim(k, DEFAULT_SUBSPACE_CAP).map(|v| v.len()))
        .collect::<Result<_>>()?;
    let v = alg.validate();
    Ok(Outcome::ok(match g.format {
        Format::Json => pretty(&json!({
            "p": p,
            "dim": alg.dim(),
            "names": alg.names(),
            "jacobi": v.jacobi,
            "order": all.order(),
            "exponent": exponent,
            "center_order": center,
            "frattini_order": frattini,
            "subalgebra_counts": counts,
        })),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "algebra: dim {} over F_{p} ({})", alg.dim(), alg.names().join(" "));
            let _ = writeln!(out, "jacobi: {}", v.jacobi);
            let _ = writeln!(out, "order: {}", all.order());
            let _ = writeln!(out, "exponent: {exponent}");
            let _ = writeln!(out, "center order: {center}");
            let _ = writeln!(out, "frattini order: {frattini}");
            for (k, c) in counts.iter().enumerate() {
                let _ = writeln!(out, "subalgebras of dimension {}: {c}", k + 1);
            }
            out
        }
    }))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse { line: 0, msg: format!("{}: {e}", path.display()) })
}

pub fn load_algebra(source: &AlgebraSource) -> Result<BracketAlgebra> {
    match (&source.algebra, &source.builtin) {
        (Some(path), None) => {
            let alg = parse_algebra(&read(path)?)?;
            if let Some(p) = source.p {
                if p != alg.field().p() as u64 {
                    return Err(Error::contract(format!("--p {p} disagrees with the file's p {}", alg.field().p())));
                }
            }
            Ok(alg)
        }
        (None, Some(name)) => {
            let p = source.p.ok_or_else(|| Error::contract("--p is required with --builtin"))?;
            let field = field_for(p)?;
            if name == "sl2" {
                Ok(BracketAlgebra::sl2(field))
            } else if let Some(n) = name.strip_prefix("zero:") {
                let n: usize = n.parse().map_err(|_| Error::Parse { line: 0, msg: format!("bad dimension in {name:?}") })?;
                if n == 0 {
                    return Err(Error::contract("zero algebra needs positive dimension"));
                }
                Ok(BracketAlgebra::abelian(field, n))
            } else {
                Err(Error::Parse { line: 0, msg: format!("unknown builtin {name:?}; expected sl2 or zero:N") })
            }
        }
        _ => Err(Error::contract("give exactly one of --algebra FILE or --builtin NAME")),
    }
}

fn field_for(p: u64) -> Result<PrimeField> {
    if p == 2 {
        return Err(Error::contract("odd prime required, got 2"));
    }
    PrimeField::new(p)
}

/// Parses a structure-constants file and rejects non-alternating brackets.
pub fn parse_algebra(text: &str) -> Result<BracketAlgebra> {
    let mut p = None;
    let mut dim = None;
    let mut names: Option<Vec<String>> = None;
    let mut entries: Vec<(usize, usize, usize, Vec<i64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let key = words.next().expect("nonempty line");
        let rest: Vec<&str> = words.collect();
        let num = |s: &str| s.parse::<i64>().map_err(|_| err(format!("expected an integer, got {s:?}")));
        match key {
            "p" => {
                if rest.len() != 1 {
                    return Err(err("expected `p <prime>`".into()));
                }
                p = Some(num(rest[0])?);
            }
            "dim" => {
                if rest.len() != 1 {
                    return Err(err("expected `dim <n>`".into()));
                }
                let n = num(rest[0])?;
                if n <= 0 {
                    return Err(err(format!("dimension must be positive, got {n}")));
                }
                dim = Some(n as usize);
            }
            "names" => names = Some(rest.iter().map(|s| s.to_string()).collect()),
            "bracket" => {
                let n = dim.ok_or_else(|| err("`dim` must come before `bracket`".into()))?;
                if rest.len() < 3 || rest[2] != "->" {
                    return Err(err("expected `bracket i j -> c0 ... c(n-1)`".into()));
                }
                let (i, j) = (num(rest[0])?, num(rest[1])?);
                if i < 0 || j < 0 || i as usize >= n || j as usize >= n {
                    return Err(err(format!("basis index out of range 0..{n}")));
                }
                let coeffs = rest[3..].iter().map(|s| num(s)).collect::<Result<Vec<_>>>()?;
                if coeffs.len() != n {
                    return Err(err(format!("expected {n} coefficients, got {}", coeffs.len())));
                }
                entries.push((line_no, i as usize, j as usize, coeffs));
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }
    let missing = |what: &str| Error::Parse { line: 0, msg: format!("missing `{what}` line") };
    let p = p.ok_or_else(|| missing("p"))?;
    let n = dim.ok_or_else(|| missing("dim"))?;
    if p <= 0 {
        return Err(Error::UnsupportedField(0));
    }
    let field = field_for(p as u64)?;
    let names = names.unwrap_or_else(|| (0..n).map(|i| format!("e{i}")).collect());
    if names.len() != n {
        return Err(Error::Parse { line: 0, msg: format!("{} names for dimension {n}", names.len()) });
    }
    let mut table = vec![vec![vec![0i64; n]; n]; n];
    let mut given = vec![vec![false; n]; n];
    for (line, i, j, c) in &entries {
        if given[*i][*j] {
            return Err(Error::Parse { line: *line, msg: format!("pair ({i}, {j}) given twice") });
        }
        given[*i][*j] = true;
        table[*i][*j] = c.clone();
    }
    for i in 0..n {
        for j in i + 1..n {
            if given[i][j] && !given[j][i] {
                table[j][i] = table[i][j].iter().map(|x| -x).collect();
            }
        }
    }
    let alg = BracketAlgebra::from_table(field, names, table)?;
    if !alg.validate().alternating {
        return Err(Error::contract("structure constants are not alternating: [x,x] = 0 or [x,y] = -[y,x] fails"));
    }
    Ok(alg)
}

/// Parses "a b c; d e f" into an integer matrix.
pub fn parse_matrix(text: &str) -> Result<IntegerMatrix> {
    let rows: Vec<Vec<i64>> = text
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|x| x.parse::<i64>().map_err(|_| Error::Parse { line: 0, msg: format!("bad matrix entry {x:?}") }))
                .collect()
        })
        .collect::<Result<_>>()?;
    IntegerMatrix::from_i64(&rows)
}

pub fn parse_table(text: &str) -> Result<TableGroup> {
    let rows: Vec<Vec<usize>> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            l.split_whitespace()
                .map(|x| x.parse::<usize>().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad table entry {x:?}") }))
                .collect()
        })
        .collect::<Result<_>>()?;
    TableGroup::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SL2_FILE: &str = "# sl2 over F_3\np 3\ndim 3\nnames h x+ x-\nbracket 0 1 -> 0 2 0\nbracket 0 2 -> 0 0 -2\nbracket 1 2 -> 1 0 0\n";

    #[test]
    fn algebra_file_round_trip() {
        let alg = parse_algebra(SL2_FILE).unwrap();
        assert_eq!(alg, BracketAlgebra::sl2(PrimeField::new(3).unwrap()));
    }

    #[test]
    fn algebra_file_errors() {
        assert!(matches!(parse_algebra("dim 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_algebra("p 3\ndim 2\nbracket 0 1 -> 1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_algebra("p 3\ndim 2\nfoo\n"), Err(Error::Parse { line: 3, .. })));
        // [e0, e0] != 0
        assert!(matches!(parse_algebra("p 3\ndim 2\nbracket 0 0 -> 0 1\n"), Err(Error::Contract(_))));
        // both orders given, not negatives of each other
        let bad = "p 5\ndim 2\nbracket 0 1 -> 1 0\nbracket 1 0 -> 1 0\n";
        assert!(parse_algebra(bad).unwrap_err().to_string().contains("not alternating"));
        assert!(parse_algebra("p 2\ndim 1\n").unwrap_err().to_string().contains("odd prime required"));
    }

    #[test]
    fn matrix_and_table_parsing() {
        let m = parse_matrix("2 4; 6 8").unwrap();
        assert_eq!(m, IntegerMatrix::from_i64(&[vec![2, 4], vec![6, 8]]).unwrap());
        assert!(parse_matrix("1 2; 3").is_err());
        assert!(parse_matrix("1 x").is_err());
        let t = parse_table("0 1 2\n1 2 0\n2 0 1\n").unwrap();
        assert_eq!(t.order(), 3);
        assert!(parse_table("0 1\n1 1\n").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::cap("x", 2u64, 1u64)), 3);
        assert_eq!(exit_code(&Error::contract("x")), 2);
    }
}
