use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use ringlab::construct::{construct, Environment};
use ringlab::dsl::{parse_module_expr, parse_program, parse_spec, Statement};
use ringlab::modlab::{module_from_expr, FinModule, ModuleError};
use ringlab::{FinRing, RingError};

use crate::{Context, Failure, InputArgs};

/// Rings and modules defined by the input, in statement order.
pub struct Loaded {
    pub rings: Vec<(String, Arc<FinRing>)>,
    pub modules: Vec<(String, String, Arc<FinModule>)>,
}

pub fn ring_failure(e: RingError) -> Failure {
    match e {
        RingError::SizeBudgetExceeded { .. } => Failure::Budget(e.to_string()),
        e => Failure::Input(e.to_string()),
    }
}

pub fn module_failure(e: ModuleError) -> Failure {
    match e {
        ModuleError::Budget(_) | ModuleError::SizeBudgetExceeded { .. } | ModuleError::RankOutOfBudget { .. } => {
            Failure::Budget(e.to_string())
        }
        ModuleError::Ring(e) => ring_failure(e),
        e => Failure::Input(e.to_string()),
    }
}

fn starts_with_keyword(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("ring ") || l.starts_with("module "))
}

/// Read the spec text: `--inline`, then a file path, then the argument itself as a spec.
fn source_text(ctx: &Context, args: &InputArgs) -> Result<(String, Option<std::path::PathBuf>), Failure> {
    match (&ctx.inline, &args.source) {
        (Some(_), Some(_)) => Err(Failure::Input("give either a spec argument or --inline, not both".into())),
        (Some(text), None) => Ok((text.clone(), None)),
        (None, Some(src)) => {
            let path = Path::new(src);
            if path.is_file() {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                Ok((text, path.parent().map(Path::to_path_buf)))
            } else {
                Ok((src.clone(), None))
            }
        }
        (None, None) => Err(Failure::Input("no spec given (pass a file, a spec, or --inline)".into())),
    }
}

pub fn load(ctx: &Context, args: &InputArgs) -> Result<Loaded, Failure> {
    let (text, base) = source_text(ctx, args)?;
    let mut env = match base {
        Some(dir) => Environment::with_base_dir(dir),
        None => Environment::default(),
    };
    let cap = ctx.budgets.max_order;
    let mut out = Loaded { rings: Vec::new(), modules: Vec::new() };
    if !starts_with_keyword(&text) {
        let spec = parse_spec(&text).map_err(|e| Failure::Input(e.to_string()))?;
        let ring = construct(&spec, &env, cap).map_err(ring_failure)?;
        out.rings.push((spec.to_string(), Arc::new(ring)));
        return Ok(out);
    }
    let program = parse_program(&text).map_err(|e| Failure::Input(e.to_string()))?;
    let mut named: HashMap<String, Arc<FinModule>> = HashMap::new();
    for stmt in program.statements {
        match stmt {
            Statement::Ring { name, spec } => {
                let ring = Arc::new(construct(&spec, &env, cap).map_err(ring_failure)?);
                env.rings.insert(name.clone(), ring.clone());
                out.rings.push((name, ring));
            }
            Statement::Module { name, ring, expr } => {
                let r = env.rings.get(&ring).ok_or_else(|| Failure::Input(format!("unknown ring `{ring}`")))?;
                let m = module_from_expr(r, &expr, &named, ctx.budgets.max_module_order).map_err(module_failure)?;
                let m = Arc::new(m.with_label(name.clone()));
                named.insert(name.clone(), m.clone());
                out.modules.push((name, ring, m));
            }
        }
    }
    Ok(out)
}

impl Loaded {
    pub fn ring(&self, name: Option<&str>) -> Result<(String, Arc<FinRing>), Failure> {
        let found = match name {
            Some(n) => self.rings.iter().find(|(m, _)| m == n),
            None => self.rings.last(),
        };
        found.cloned().ok_or_else(|| match name {
            Some(n) => Failure::Input(format!("no ring named `{n}`")),
            None => Failure::Input("input defines no ring".into()),
        })
    }

    /// The requested module: by name, by expression over the selected ring,
    /// else the last module statement, else the regular module of the ring.
    pub fn module(
        &self,
        ctx: &Context,
        ring: Option<&str>,
        name: Option<&str>,
        expr: Option<&str>,
    ) -> Result<Arc<FinModule>, Failure> {
        if let Some(n) = name {
            return self
                .modules
                .iter()
                .find(|(m, _, _)| m == n)
                .map(|(_, _, m)| m.clone())
                .ok_or_else(|| Failure::Input(format!("no module named `{n}`")));
        }
        if expr.is_none() && ring.is_none() {
            if let Some((_, _, m)) = self.modules.last() {
                return Ok(m.clone());
            }
        }
        let (ring_name, r) = self.ring(ring)?;
        let text = expr.unwrap_or("free(1)");
        let parsed = parse_module_expr(text).map_err(|e| Failure::Input(e.to_string()))?;
        let named: HashMap<String, Arc<FinModule>> =
            self.modules.iter().map(|(n, _, m)| (n.clone(), m.clone())).collect();
        let m = module_from_expr(&r, &parsed, &named, ctx.budgets.max_module_order).map_err(module_failure)?;
        Ok(Arc::new(m.with_label(format!("{text} over {ring_name}"))))
    }
}
