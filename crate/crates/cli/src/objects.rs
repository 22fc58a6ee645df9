//! Object expressions given on the command line.
//!
//! `a + b` is a direct sum and `a * b` a tensor product (`*` binds tighter).
//! Atoms: `unit`, `zero`, `chi:LABEL`, `e:LABEL`, `ek:LABEL` (trivial `Out`
//! action), level forms `chi_N`, `gamma_N`, `e_N`, `ek_N` over N-stable
//! families, and paths to object files.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use globrep::family::GroupFamily;
use globrep::rep::read_rep;
use globrep::rep::{chi_from_outrep, dsum, e_g, e_trivial, tensor, unit, OutRep, Rep};
use globrep::serre::{NamedObject, SymbolicObject};
use globrep::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Unit,
    Zero,
    Chi(String),
    E(String),
    ETrivial(String),
    Level(NamedObject),
    File(PathBuf),
    Tensor(Box<Expr>, Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
}

fn level(s: &str, prefix: &str) -> Option<usize> {
    s.strip_prefix(prefix)?.parse().ok()
}

fn atom(s: &str) -> Result<Expr> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty object expression".into()));
    }
    if let Some(l) = s.strip_prefix("chi:") {
        return Ok(Expr::Chi(l.to_string()));
    }
    if let Some(l) = s.strip_prefix("ek:") {
        return Ok(Expr::ETrivial(l.to_string()));
    }
    if let Some(l) = s.strip_prefix("e:") {
        return Ok(Expr::E(l.to_string()));
    }
    let named = match s {
        "unit" | "1" => return Ok(Expr::Unit),
        "zero" | "0" => return Ok(Expr::Zero),
        _ => level(s, "chi_")
            .map(NamedObject::Chi)
            .or_else(|| level(s, "gamma_").map(NamedObject::Gamma))
            .or_else(|| level(s, "ek_").map(NamedObject::ETrivial))
            .or_else(|| level(s, "e_").map(NamedObject::E)),
    };
    if let Some(n) = named {
        return Ok(Expr::Level(n));
    }
    let path = Path::new(s);
    if path.extension().is_some_and(|e| e == "json") || path.exists() {
        return Ok(Expr::File(path.to_path_buf()));
    }
    Err(Error::Parse(format!("unrecognized object `{s}`")))
}

pub fn parse(s: &str) -> Result<Expr> {
    let terms = s
        .split('+')
        .map(|term| {
            term.split('*')
                .map(atom)
                .reduce(|a, b| Ok(Expr::Tensor(Box::new(a?), Box::new(b?))))
                .expect("split yields at least one piece")
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(terms
        .into_iter()
        .reduce(|a, b| Expr::Sum(Box::new(a), Box::new(b)))
        .expect("split yields at least one piece"))
}

/// Reads an object file; unreadable files are input errors.
pub fn read_file(path: &Path) -> Result<Rep> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    read_rep(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// The object over a finite family.
pub fn evaluate(expr: &Expr, family: &Arc<GroupFamily>) -> Result<Rep> {
    match expr {
        Expr::Unit => Ok(unit(family)),
        Expr::Zero => Ok(Rep::zero(family)),
        Expr::Chi(l) => Ok(chi_from_outrep(&OutRep::trivial(
            family,
            family.class_index(l)?,
            1,
        ))),
        Expr::E(l) => Ok(e_g(family, family.class_index(l)?)),
        Expr::ETrivial(l) => e_trivial(family, family.class_index(l)?),
        Expr::Level(n) => n.materialize(family),
        Expr::File(p) => {
            let x = read_file(p)?;
            if **x.family() != **family {
                return Err(Error::FamilyMismatch);
            }
            Ok(x)
        }
        Expr::Tensor(a, b) => tensor(&evaluate(a, family)?, &evaluate(b, family)?),
        Expr::Sum(a, b) => dsum(&evaluate(a, family)?, &evaluate(b, family)?),
    }
}

/// The named object over an unbounded N-stable kind.
pub fn named(expr: &Expr) -> Result<NamedObject> {
    match expr {
        Expr::Unit => Ok(NamedObject::Unit),
        Expr::Zero => Ok(NamedObject::Zero),
        Expr::Level(n) => Ok(n.clone()),
        Expr::Tensor(a, b) => Ok(NamedObject::tensor(named(a)?, named(b)?)),
        Expr::Sum(a, b) => Ok(NamedObject::sum(named(a)?, named(b)?)),
        other => Err(Error::NeedsTruncation(format!(
            "`{other:?}` has no closed form over an unbounded family; pass --truncation"
        ))),
    }
}

pub fn symbolic(expr: &Expr) -> Result<SymbolicObject> {
    Ok(SymbolicObject::named(&named(expr)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse("chi:C2 + e:C4 * unit").unwrap();
        assert_eq!(
            e,
            Expr::Sum(
                Box::new(Expr::Chi("C2".into())),
                Box::new(Expr::Tensor(
                    Box::new(Expr::E("C4".into())),
                    Box::new(Expr::Unit)
                ))
            )
        );
        assert_eq!(
            parse("gamma_2*chi_1").unwrap(),
            Expr::Tensor(
                Box::new(Expr::Level(NamedObject::Gamma(2))),
                Box::new(Expr::Level(NamedObject::Chi(1)))
            )
        );
        assert!(parse("bogus").is_err());
        assert!(parse("unit +").is_err());
    }

    #[test]
    fn evaluation() {
        let f = GroupFamily::cyclic_p(2, 2).unwrap();
        let x = evaluate(&parse("e:C2 * chi:C4").unwrap(), &f).unwrap();
        assert_eq!(x.dims(), &[0, 0, 1]);
        assert!(evaluate(&parse("chi:C8").unwrap(), &f).is_err());
        assert_eq!(
            named(&parse("gamma_1 * gamma_3").unwrap())
                .unwrap()
                .descriptor()
                .to_string(),
            "N\\{1,3}"
        );
        assert!(named(&parse("chi:C2").unwrap()).is_err());
    }
}
