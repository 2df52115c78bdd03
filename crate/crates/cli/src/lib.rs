//! Argument handling for the `lwchar` binary.
//!
//! Everything goes through [`run`], which never touches the process
//! environment, so tests can drive the tool in-process.

use std::fmt;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lwchar_core::affine::{q_denominator, AffineType, Spec};
use lwchar_core::array::{
    check_mirror, check_translation, cols_per_period, period_product, q_from_array, spec_array, ArrayError,
};
use lwchar_core::formulas::{
    borcea_check, char_explicit, char_ratio, check_ps_weight, list_identities, verify_identity, CharFamily, CharSpec,
    FormulaError, VerifyReport,
};
use lwchar_core::partitions::{enumerate, verify_conjecture, EnumOptions, PartitionError, PartitionProblem};
use lwchar_core::qseries::ParseError;
use lwchar_core::{HighestWeight, ProductExpr, Series};
use serde_json::{json, Number, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub status: i32,
}

#[derive(Parser, Debug)]
#[command(name = "lwchar", version, about = "Specialized root arrays, character products and partition counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render the specialized array of negative root vectors.
    Array(ArrayArgs),
    /// Expand a denominator Q(s; type) or a product expression.
    Qprod(QprodArgs),
    /// Print the explicit product and expansion of a character.
    Char(CharArgs),
    /// Check an identity to a given order.
    Verify(VerifyArgs),
    /// Count admissible colored partitions by norm.
    Partitions(PartitionArgs),
    /// List the identities known to `verify`.
    Identities(FormatArg),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct TypeArgs {
    /// Affine type: c1, d2, a2 or a2t.
    #[arg(long = "type", value_name = "TYPE")]
    ty: AffineType,
    #[arg(long)]
    rank: usize,
    /// Specialization s_0,...,s_l (default: all ones).
    #[arg(long, value_delimiter = ',')]
    spec: Option<Vec<u64>>,
}

impl TypeArgs {
    fn spec(&self) -> Result<Spec, Failure> {
        let s = self.spec.clone().unwrap_or_else(|| vec![1; self.rank + 1]);
        Spec::new(self.ty, self.rank, s).map_err(usage)
    }
}

#[derive(Args, Debug)]
struct ArrayArgs {
    #[command(flatten)]
    target: TypeArgs,
    /// Number of columns (default: two periods).
    #[arg(long)]
    cols: Option<usize>,
    /// Also run the construction self-checks.
    #[arg(long)]
    check: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("what").required(true).args(["ty", "expr"]))]
struct QprodArgs {
    #[arg(long = "type", value_name = "TYPE", requires = "rank")]
    ty: Option<AffineType>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, value_delimiter = ',', requires = "ty")]
    spec: Option<Vec<u64>>,
    /// A product such as "(1-q^j)^-1 : j = 1,4 mod 5".
    #[arg(long, conflicts_with_all = ["ty", "rank", "spec", "check"])]
    expr: Option<String>,
    #[arg(long, default_value_t = 60)]
    order: usize,
    /// Compare the array's product with the root enumeration.
    #[arg(long)]
    check: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct CharParamArgs {
    /// Rank; must agree with --weight / --spec when given.
    #[arg(long)]
    rank: Option<usize>,
    /// Highest weight k_0,...,k_l.
    #[arg(long, value_delimiter = ',')]
    weight: Option<Vec<u64>>,
    /// Specialization for the ps families.
    #[arg(long, value_delimiter = ',')]
    spec: Option<Vec<u64>>,
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args, Debug)]
struct CharArgs {
    #[arg(long)]
    family: CharFamily,
    #[command(flatten)]
    params: CharParamArgs,
    #[arg(long, default_value_t = 60)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("which").required(true).args(["identity", "conjecture"]))]
struct VerifyArgs {
    /// Catalog name (see `identities`).
    #[arg(long)]
    identity: Option<String>,
    /// Check partition counts against the character.
    #[arg(long)]
    conjecture: bool,
    #[command(flatten)]
    params: CharParamArgs,
    #[arg(long)]
    level: Option<u64>,
    #[arg(long, default_value_t = 20)]
    bound: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Compare the left side with this product instead of the built-in one.
    #[arg(long, value_name = "EXPR")]
    against: Option<String>,
    #[arg(long, default_value_t = 60)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct PartitionArgs {
    #[arg(long)]
    rank: Option<usize>,
    /// Level; alone it means level * Lambda_0.
    #[arg(long)]
    level: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    weight: Option<Vec<u64>>,
    /// Specialization (default: all ones).
    #[arg(long, value_delimiter = ',')]
    spec: Option<Vec<u64>>,
    #[arg(long, default_value_t = 20)]
    bound: u64,
    /// Compare the counts with the specialized character.
    #[arg(long)]
    check: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

fn usage(e: impl fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::Series(_) => Failure::Internal(e.to_string()),
            _ => usage(e),
        }
    }
}

impl From<ArrayError> for Failure {
    fn from(e: ArrayError) -> Self {
        match e {
            ArrayError::LabelAbovePeriod { .. } => Failure::Internal(e.to_string()),
            _ => usage(e),
        }
    }
}

impl From<PartitionError> for Failure {
    fn from(e: PartitionError) -> Self {
        match e {
            PartitionError::Formula(f) => f.into(),
            PartitionError::Array(a) => a.into(),
            PartitionError::NotANode { .. } => Failure::Internal(e.to_string()),
            _ => usage(e),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        usage(e)
    }
}

/// What a subcommand produced: its document and whether the check held.
struct Done {
    stdout: String,
    holds: bool,
    note: String,
}

impl Done {
    fn ok(stdout: String) -> Done {
        Done { stdout, holds: true, note: String::new() }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, status: EXIT_USAGE }
            } else {
                Outcome { stdout: text, stderr: String::new(), status: EXIT_OK }
            };
        }
    };
    let result = match cli.command {
        Command::Array(a) => array_cmd(a),
        Command::Qprod(a) => qprod_cmd(a),
        Command::Char(a) => char_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Partitions(a) => partitions_cmd(a),
        Command::Identities(a) => Ok(Done::ok(identities_cmd(a.format))),
    };
    match result {
        Ok(d) => Outcome { stdout: d.stdout, stderr: d.note, status: if d.holds { EXIT_OK } else { EXIT_MISMATCH } },
        Err(Failure::Usage(m)) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {m}\n\nFor more information, try '--help'.\n"),
            status: EXIT_USAGE,
        },
        Err(Failure::Internal(m)) => {
            Outcome { stdout: String::new(), stderr: format!("internal error: {m}\n"), status: EXIT_INTERNAL }
        }
    }
}

fn coeffs_json(s: &Series) -> Value {
    Value::Array(
        s.coeffs().iter().map(|c| Value::Number(c.to_string().parse::<Number>().expect("integer literal"))).collect(),
    )
}

fn csv(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn compact(v: Value) -> String {
    let mut s = serde_json::to_string(&v).expect("plain data");
    s.push('\n');
    s
}

fn array_cmd(a: ArrayArgs) -> Result<Done, Failure> {
    let spec = a.target.spec()?;
    let ncols = a.cols.unwrap_or(2 * cols_per_period(spec.ty, spec.l));
    let arr = spec_array(&spec, ncols)?;
    if a.check {
        check_translation(&arr).map_err(Failure::Internal)?;
        check_mirror(&arr).map_err(Failure::Internal)?;
    }
    Ok(Done::ok(match a.format {
        Format::Text => arr.render_text(),
        Format::Json => {
            let mut s = arr.to_json();
            s.push('\n');
            s
        }
    }))
}

fn qprod_cmd(a: QprodArgs) -> Result<Done, Failure> {
    if let Some(text) = &a.expr {
        let p = ProductExpr::parse(text)?;
        let series = p.expand(a.order);
        return Ok(Done::ok(match a.format {
            Format::Text => format!("product {p}\nseries {series}\n"),
            Format::Json => compact(json!({
                "expr": p.to_string(),
                "order": a.order,
                "coeffs": coeffs_json(&series),
            })),
        }));
    }
    let (ty, rank) = (a.ty.expect("required by arg group"), a.rank.expect("required with --type"));
    let spec = TypeArgs { ty, rank, spec: a.spec }.spec()?;
    let series = q_denominator(&spec, a.order);
    let arr = spec_array(&spec, cols_per_period(spec.ty, spec.l))?;
    let product = period_product(&arr)?;
    if a.check {
        let from_array = q_from_array(&arr, a.order)?;
        let cmp = from_array.eq_to_order(&series, a.order).map_err(|e| Failure::Internal(e.to_string()))?;
        if let Some(m) = cmp.first_mismatch {
            return Err(Failure::Internal(format!(
                "array product and root enumeration differ at q^{} ({} vs {})",
                m.exponent, m.lhs, m.rhs
            )));
        }
    }
    Ok(Done::ok(match a.format {
        Format::Text => format!(
            "type {} s {} period {}\nproduct {product}\nseries {series}\n",
            spec.ty,
            csv(&spec.s),
            spec.period()
        ),
        Format::Json => compact(json!({
            "type": spec.ty.name(),
            "s": spec.s,
            "order": a.order,
            "period": spec.period(),
            "product": product.to_string(),
            "coeffs": coeffs_json(&series),
        })),
    }))
}

fn build_char_spec(family: CharFamily, p: &CharParamArgs) -> Result<CharSpec, Failure> {
    let spec = if family.is_ps() {
        let s = p.spec.as_ref().ok_or_else(|| usage(format!("{family} needs --spec")))?;
        let n = p.n.ok_or_else(|| usage(format!("{family} needs --n")))?;
        let spec = CharSpec::ps(family, s, n)?;
        if let Some(w) = &p.weight {
            check_ps_weight(family, &HighestWeight(w.clone()), n)?;
        }
        spec
    } else {
        if p.n.is_some() {
            return Err(usage(format!("{family} does not take --n")));
        }
        let w = p.weight.as_ref().ok_or_else(|| usage(format!("{family} needs --weight")))?;
        let spec = CharSpec::weight(family, w)?;
        if let Some(s) = &p.spec {
            if *s != spec.specialization() {
                return Err(usage(format!(
                    "{family} uses the specialization {}, not {}",
                    csv(&spec.specialization()),
                    csv(s)
                )));
            }
        }
        spec
    };
    if let Some(r) = p.rank {
        if r != spec.l {
            return Err(usage(format!("--rank {r} does not match the parameters (rank {})", spec.l)));
        }
    }
    Ok(spec)
}

fn char_cmd(a: CharArgs) -> Result<Done, Failure> {
    let spec = build_char_spec(a.family, &a.params)?;
    let product = char_explicit(&spec)?;
    let series = char_ratio(&spec, a.order)?;
    let weight = spec.highest_weight();
    let s = spec.specialization();
    Ok(Done::ok(match a.format {
        Format::Text => format!(
            "family {}\nweight {}\nspec {}\nproduct {product}\nseries {series}\n",
            a.family,
            csv(&weight.0),
            csv(&s)
        ),
        Format::Json => compact(json!({
            "family": a.family.name(),
            "weight": weight.0,
            "s": s,
            "order": a.order,
            "product": product.to_string(),
            "coeffs": coeffs_json(&series),
        })),
    }))
}

fn report_done(report: VerifyReport, format: Format) -> Done {
    let holds = report.equal();
    let mismatch = report
        .first_mismatch
        .as_ref()
        .map(|m| format!("first mismatch at q^{}: lhs {} rhs {}", m.exponent, m.lhs, m.rhs));
    let stdout = match format {
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!(
                "identity {}\norder {}\nlhs {}\nrhs {}\n",
                report.identity, report.order, report.lhs_text, report.rhs_text
            );
            match &mismatch {
                None => s.push_str("result holds\n"),
                Some(m) => s.push_str(&format!("result FAILS\n{m}\n")),
            }
            s
        }
    };
    Done { stdout, holds, note: mismatch.map(|m| m + "\n").unwrap_or_default() }
}

fn partition_problem(
    rank: Option<usize>,
    level: Option<u64>,
    weight: Option<&Vec<u64>>,
    spec: Option<&Vec<u64>>,
    bound: u64,
) -> Result<PartitionProblem, Failure> {
    let weight = match (weight, level) {
        (Some(w), lvl) => {
            if let Some(k) = lvl {
                let sum: u64 = w.iter().sum();
                if sum != k {
                    return Err(usage(format!("--weight {} has level {sum}, not {k}", csv(w))));
                }
            }
            w.clone()
        }
        (None, Some(k)) => {
            let l = rank.ok_or_else(|| usage("--level without --weight needs --rank"))?;
            let mut w = vec![0; l + 1];
            w[0] = k;
            w
        }
        (None, None) => return Err(usage("give --weight or --level")),
    };
    if weight.is_empty() {
        return Err(usage("empty --weight"));
    }
    let l = weight.len() - 1;
    if let Some(r) = rank {
        if r != l {
            return Err(usage(format!("--rank {r} does not match the weight (rank {l})")));
        }
    }
    let s = spec.cloned().unwrap_or_else(|| vec![1; l + 1]);
    Ok(PartitionProblem { weight: HighestWeight(weight), s, bound })
}

fn verify_cmd(a: VerifyArgs) -> Result<Done, Failure> {
    let name = if a.conjecture { "conjecture" } else { a.identity.as_deref().expect("required by arg group") };
    if a.conjecture && a.identity.as_deref().is_some_and(|i| i != "conjecture") {
        return Err(usage("--conjecture cannot be combined with another --identity"));
    }
    let against = a.against.as_deref().map(ProductExpr::parse).transpose()?;
    let report = match name {
        "conjecture" => {
            let p = &a.params;
            if p.n.is_some() {
                return Err(usage("--n is not used by the partition check"));
            }
            let problem = partition_problem(p.rank, a.level, p.weight.as_ref(), p.spec.as_ref(), a.bound)?;
            verify_conjecture(&problem, &EnumOptions { threads: a.threads.max(1), ..Default::default() })?
        }
        "borcea" => {
            let p = &a.params;
            if p.spec.is_some() || p.n.is_some() {
                return Err(usage("borcea takes only --weight"));
            }
            let spec = build_char_spec(CharFamily::BorceaLhs, p)?;
            borcea_check(&spec.highest_weight(), a.order)?
        }
        other => {
            let family: CharFamily = other
                .parse()
                .map_err(|_| usage(format!("unknown identity '{other}' (run `lwchar identities` for the list)")))?;
            verify_identity(&build_char_spec(family, &a.params)?, a.order)?
        }
    };
    let report = match against {
        None => report,
        Some(p) => {
            let order = report.order;
            let mut r = VerifyReport::new(report.identity, report.lhs, p.expand(order))?;
            r.lhs_text = report.lhs_text;
            r.rhs_text = p.to_string();
            r
        }
    };
    Ok(report_done(report, a.format))
}

fn partitions_cmd(a: PartitionArgs) -> Result<Done, Failure> {
    let problem = partition_problem(a.rank, a.level, a.weight.as_ref(), a.spec.as_ref(), a.bound)?;
    let opts = EnumOptions { threads: a.threads.max(1), ..Default::default() };
    let result = enumerate(&problem, &opts)?;
    let mut done = Done::ok(match a.format {
        Format::Json => {
            let mut s = result.to_json(&problem);
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::from("n count\n");
            for (n, c) in result.counts.iter().enumerate() {
                s.push_str(&format!("{n} {c}\n"));
            }
            s
        }
    });
    if a.check {
        let expected = lwchar_core::partitions::expected_character(&problem)?;
        let report = VerifyReport::new("partitions", result.series(), expected)?;
        if let Some(m) = &report.first_mismatch {
            done.holds = false;
            done.note = format!("check FAILS at q^{}: counted {} expected {}\n", m.exponent, m.lhs, m.rhs);
        } else {
            done.note = format!("check holds to order {}\n", problem.bound);
        }
        if a.format == Format::Text {
            done.stdout.push_str(&std::mem::take(&mut done.note));
        }
    }
    Ok(done)
}

fn identities_cmd(format: Format) -> String {
    let entries = list_identities();
    match format {
        Format::Json => compact(serde_json::to_value(&entries).expect("plain data")),
        Format::Text => {
            let w = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
            let mut s = String::new();
            for e in &entries {
                s.push_str(&format!("{:<w$}  {}  [{}]  e.g. {}\n", e.name, e.specialization, e.params, e.sample));
                s.push_str(&format!("{:<w$}  {}\n", "", e.description));
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_alone_means_multiple_of_lambda_zero() {
        let p = partition_problem(Some(3), Some(2), None, None, 5).unwrap();
        assert_eq!(p.weight.0, vec![2, 0, 0, 0]);
        assert_eq!(p.s, vec![1, 1, 1, 1]);
    }

    #[test]
    fn level_must_match_weight() {
        assert!(matches!(partition_problem(None, Some(2), Some(&vec![1, 0, 0]), None, 5), Err(Failure::Usage(_))));
        assert!(matches!(partition_problem(None, None, None, None, 5), Err(Failure::Usage(_))));
        assert!(matches!(partition_problem(Some(3), None, Some(&vec![1, 0, 0]), None, 5), Err(Failure::Usage(_))));
    }

    #[test]
    fn series_errors_are_internal() {
        let e = FormulaError::Series(lwchar_core::qseries::SeriesError::OrderMismatch { left: 1, right: 2 });
        assert!(matches!(Failure::from(e), Failure::Internal(_)));
        assert!(matches!(Failure::from(FormulaError::ZeroN), Failure::Usage(_)));
    }

    #[test]
    fn weight_family_rejects_foreign_specialization() {
        let p = CharParamArgs { rank: None, weight: Some(vec![1, 0, 0]), spec: Some(vec![1, 1, 1]), n: None };
        assert!(build_char_spec(CharFamily::Lepowsky, &p).is_ok());
        let p = CharParamArgs { spec: Some(vec![2, 1, 1]), ..p };
        assert!(build_char_spec(CharFamily::Lepowsky, &p).is_err());
    }

    #[test]
    fn csv_joins() {
        assert_eq!(csv(&[3, 1, 1]), "3,1,1");
    }
}
