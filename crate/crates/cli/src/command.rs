//! Command dispatch.

use crate::model::{ModelFile, ParseError};
use crate::output::{Document, Node};
use jetvar::numeric::{discrete_action_gradient, GridSpec};
use jetvar::symmetry::{
    conserved_current, covariance_system, generalized_invariance_check, noether_check, symmetric_system,
    weak_critical_system,
};
use jetvar::variational::{
    canonical_split, euler, extremal_residual, lepage_delta, lepage_theta, null_certificate, null_from_form, null_test,
};
use jetvar::{DiffForm, Error, Lagrangian, PolySection, ProjectableField, TensorType};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LepageMethod {
    Theta,
    Delta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Euler,
    Lepage(LepageMethod),
    Split { form: Option<String> },
    NullTest,
    MakeNull { form: String },
    Noether { field: String },
    Invariance { field: String },
    Current { field: String },
    Symmetric { fields: Vec<String> },
    Covariance,
    WeakCritical,
    Residual { section: String },
    GradCheck { section: String, grid: usize },
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Parse(ParseError),
    Module(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Parse(_) | Failure::Module(_) => 1,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Parse(_) => "parse",
            Failure::Module(e) => e.code(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(s) => write!(f, "{s}"),
            Failure::Parse(e) => write!(f, "{e}"),
            Failure::Module(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

fn lagrangian(model: &ModelFile) -> Result<Lagrangian, Failure> {
    let e = model.lagrangian().ok_or_else(|| Error::Context("the model has no [lagrangian] section".into()))?;
    Ok(Lagrangian::new(&model.context, e.clone())?)
}

fn lookup<'a, T>(items: &'a std::collections::BTreeMap<String, T>, name: &str, kind: &str) -> Result<&'a T, Failure> {
    items.get(name).ok_or_else(|| {
        let known: Vec<&str> = items.keys().map(String::as_str).collect();
        Failure::Usage(format!(
            "no {kind} named {name} (defined: {})",
            if known.is_empty() { "none".into() } else { known.join(", ") }
        ))
    })
}

fn field<'a>(model: &'a ModelFile, name: &str) -> Result<&'a ProjectableField, Failure> {
    lookup(&model.fields, name, "field")
}

fn form<'a>(model: &'a ModelFile, name: &str) -> Result<&'a DiffForm, Failure> {
    lookup(&model.forms, name, "form")
}

fn section<'a>(model: &'a ModelFile, name: &str) -> Result<&'a PolySection, Failure> {
    lookup(&model.sections, name, "section")
}

fn tensor(model: &ModelFile) -> Result<&TensorType, Failure> {
    model
        .tensor_type
        .as_ref()
        .ok_or_else(|| Failure::Module(Error::Context("the model has no [tensor_type] section".into())))
}

/// Run a command against a parsed model.
pub fn run(cmd: &Command, model: &ModelFile) -> Result<Node, Failure> {
    let ctx = &model.context;
    let n = ctx.n();
    Ok(match cmd {
        Command::Euler => {
            let e = euler(ctx, &lagrangian(model)?)?;
            Node::map([("E", Node::indexed(e.components()))])
        }
        Command::Lepage(method) => {
            let l = lagrangian(model)?;
            let (name, rho) = match method {
                LepageMethod::Theta => ("theta", lepage_theta(ctx, &l)?),
                LepageMethod::Delta => ("delta", lepage_delta(ctx, &l)?),
            };
            Node::map([("method", Node::Str(name.into())), ("form", Node::Form(rho))])
        }
        Command::Split { form: name } => {
            let rho = match name {
                Some(name) => form(model, name)?.clone(),
                None => lagrangian(model)?.form(n),
            };
            let split = canonical_split(ctx, &rho)?;
            let a = split.offending().into_iter().map(|((k, nu), e)| (format!("{k},{nu}"), Node::Expr(e)));
            Node::map([
                ("G", Node::expr(&split.g)),
                ("A", Node::map(a)),
                ("E", Node::indexed(split.euler.components())),
                ("lepagean", Node::Bool(split.is_lepagean())),
            ])
        }
        Command::NullTest => {
            let l = lagrangian(model)?;
            let is_null = null_test(ctx, &l)?;
            let mut out = vec![("is_null", Node::Bool(is_null))];
            if is_null {
                match null_certificate(ctx, &l) {
                    Ok(rho) => out.push(("certificate", Node::Form(rho))),
                    Err(e @ Error::Structure(_)) => {
                        out.push(("certificate", Node::Null));
                        out.push(("certificate_error", Node::Str(e.to_string())));
                    }
                    Err(e) => return Err(e.into()),
                }
            } else {
                let e = euler(ctx, &l)?;
                out.push(("E", Node::indexed(e.components())));
            }
            Node::map(out)
        }
        Command::MakeNull { form: name } => {
            let l = null_from_form(ctx, form(model, name)?)?;
            Node::map([("L", Node::expr(l.density()))])
        }
        Command::Noether { field: name } => {
            let (inv, residual) = noether_check(ctx, &lagrangian(model)?, field(model, name)?)?;
            Node::map([("invariant", Node::Bool(inv)), ("residual", Node::Expr(residual))])
        }
        Command::Invariance { field: name } => {
            let v = generalized_invariance_check(ctx, &lagrangian(model)?, field(model, name)?)?;
            Node::map([
                ("invariant", Node::Bool(v.invariant)),
                ("generalized_invariant", Node::Bool(v.generalized_invariant)),
                ("lie", Node::Expr(v.lie)),
                ("lie_euler", Node::indexed(v.lie_euler.components())),
                ("certificate", v.certificate.map_or(Node::Null, Node::Form)),
            ])
        }
        Command::Current { field: name } => {
            let c = conserved_current(ctx, &lagrangian(model)?, field(model, name)?)?;
            Node::map([
                ("J", Node::indexed(&c.currents)),
                ("Q", Node::indexed(&c.characteristics)),
                ("E", Node::indexed(c.euler.components())),
                ("lie", Node::Expr(c.lie)),
                ("divergence", Node::Expr(c.divergence)),
                ("residual", Node::Expr(c.residual)),
            ])
        }
        Command::Symmetric { fields } => {
            let fs = fields.iter().map(|f| field(model, f).cloned()).collect::<Result<Vec<_>, _>>()?;
            let systems = symmetric_system(ctx, &lagrangian(model)?, &fs)?;
            let per_field =
                fields.iter().zip(&systems[1..]).map(|(name, e)| (name.clone(), Node::indexed(e.components())));
            Node::map([("E", Node::indexed(systems[0].components())), ("fields", Node::map(per_field))])
        }
        Command::Covariance => {
            let table = covariance_system(ctx, &lagrangian(model)?, tensor(model)?)?;
            let mut per_c: std::collections::BTreeMap<String, Vec<(String, Node)>> = Default::default();
            for c in 1..=ctx.m() {
                per_c.insert(c.to_string(), Vec::new());
            }
            for (c, p, j, e) in table.nonzero() {
                let sym = &table.symbols()[p - 1];
                let key = if j.is_empty() {
                    sym.clone()
                } else {
                    let args: Vec<String> = j.entries().iter().map(|k| format!("x{k}")).collect();
                    format!("diff({sym}, {})", args.join(", "))
                };
                per_c.get_mut(&c.to_string()).expect("all components").push((key, Node::Expr(e)));
            }
            Node::map([
                ("covariant", Node::Bool(table.is_zero())),
                ("coefficients", Node::map(per_c.into_iter().map(|(k, v)| (k, Node::map(v))))),
            ])
        }
        Command::WeakCritical => {
            let w = weak_critical_system(ctx, &lagrangian(model)?, tensor(model)?)?;
            Node::map([("W", Node::indexed(&w))])
        }
        Command::Residual { section: name } => {
            let r = extremal_residual(ctx, &lagrangian(model)?, section(model, name)?)?;
            Node::map([("extremal", Node::Bool(r.iter().all(|e| e.is_zero()))), ("residual", Node::indexed(&r))])
        }
        Command::GradCheck { section: name, grid } => {
            let l = lagrangian(model)?;
            let rep =
                discrete_action_gradient(l.density(), ctx.m(), section(model, name)?, GridSpec { n, nodes: *grid })?;
            Node::map([
                ("nodes", Node::Int(rep.nodes as i64)),
                ("h", Node::Float(rep.h)),
                ("max_relative_error", Node::Float(rep.max_relative_error)),
                ("max_euler", Node::Float(rep.max_euler)),
                ("max_interior_gradient", Node::Float(rep.max_interior_gradient)),
                ("max_boundary_gradient", Node::Float(rep.max_boundary_gradient)),
                ("vacuous", Node::Bool(rep.vacuous)),
            ])
        }
    })
}

/// Describe the model's jet space and declarations.
pub fn context_node(model: &ModelFile) -> Node {
    let functions = model
        .context
        .functions()
        .iter()
        .map(|f| (f.name().to_string(), Node::List(f.args().iter().map(|c| Node::Str(c.to_string())).collect())));
    let tensor = match &model.tensor_type {
        None => Node::Null,
        Some(t) => {
            Node::map([("variance", Node::Str(t.variance_string())), ("cov_sign", Node::Int(t.cov_sign() as i64))])
        }
    };
    Node::map([
        ("base_dim", Node::Int(model.base_dim as i64)),
        ("fiber_dim", Node::Int(model.fiber_dim as i64)),
        ("order", Node::Int(model.order as i64)),
        ("max_order", Node::Int(model.context.max_order() as i64)),
        ("functions", Node::map(functions)),
        ("tensor_type", tensor),
    ])
}

pub fn document(model: &ModelFile, result: Node) -> Document {
    Document { context: context_node(model), result, warnings: model.warnings.iter().map(|w| w.to_string()).collect() }
}

/// Parse, dispatch and assemble the output document.
pub fn execute(cmd: &Command, text: &str, max_order: usize) -> Result<Document, Failure> {
    let model = ModelFile::parse(text, max_order)?;
    let result = run(cmd, &model)?;
    Ok(document(&model, result))
}
