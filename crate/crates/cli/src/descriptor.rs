//! Parser for family descriptors such as `W(Z>=0)`, `FIN(Z)`, `W(mon{2,3})`
//! and `explicit{{},{0},{0,1}}`.

use hahn_core::exponents::{GroupDescriptor, GroupElement};
use hahn_core::supports::{FamilyDescriptor, RegionDescriptor, SupportSet};

use crate::semantics::{exponent_in, SemanticError};
use crate::syntax::{Cursor, SyntaxError, Tok};

pub fn parse_family(src: &str, group: GroupDescriptor) -> Result<FamilyDescriptor, SemanticError> {
    let mut c = Cursor::new(src)?;
    let family = match c.bump() {
        Tok::Ident(name) if name == "W" || name == "FIN" => {
            c.expect('(')?;
            let region = region(&mut c, group)?;
            c.expect(')')?;
            if name == "W" {
                FamilyDescriptor::W(region)
            } else {
                FamilyDescriptor::Fin(region)
            }
        }
        Tok::Ident(name) if name == "explicit" => {
            c.expect('{')?;
            let mut members = Vec::new();
            if !c.eat('}') {
                loop {
                    members.push(SupportSet::finite(element_list(&mut c, group)?));
                    if c.eat('}') {
                        break;
                    }
                    c.expect(',')?;
                }
            }
            FamilyDescriptor::explicit(members)
        }
        _ => return Err(syntax_at_start(src, "`W(..)`, `FIN(..)` or `explicit{..}`").into()),
    };
    c.expect_end()?;
    Ok(family)
}

fn syntax_at_start(src: &str, wanted: &str) -> SyntaxError {
    let c = Cursor::new(src).expect("already tokenized");
    c.unexpected(wanted)
}

/// `{e1, e2, ..}`, possibly empty.
fn element_list(c: &mut Cursor, group: GroupDescriptor) -> Result<Vec<GroupElement>, SemanticError> {
    c.expect('{')?;
    let mut out = Vec::new();
    if c.eat('}') {
        return Ok(out);
    }
    loop {
        out.push(exponent_in(&c.exponent()?, group)?);
        if c.eat('}') {
            return Ok(out);
        }
        c.expect(',')?;
    }
}

fn region(c: &mut Cursor, group: GroupDescriptor) -> Result<RegionDescriptor, SemanticError> {
    match c.peek().clone() {
        Tok::Sym('{') => return Ok(RegionDescriptor::FiniteSet(element_list(c, group)?)),
        Tok::Ident(name) if name == "mon" || name == "grp" => {
            c.bump();
            let gens = element_list(c, group)?;
            return Ok(if name == "mon" {
                RegionDescriptor::SubmonoidGen(gens)
            } else {
                RegionDescriptor::SubgroupGen(gens)
            });
        }
        _ => {}
    }
    group_name(c, group)?;
    if c.eat('>') {
        let inclusive = c.eat('=');
        let zero = c.exponent()?;
        if !matches!(&zero, crate::syntax::ExponentLit::Ratio(n, _) if n == &0.into()) {
            return Err(c.error("only cones `>=0` and `>0` are supported").into());
        }
        return Ok(if inclusive { RegionDescriptor::NonNegCone } else { RegionDescriptor::PosCone });
    }
    Ok(RegionDescriptor::WholeGroup)
}

/// A group name (`G`, `Z`, `Q`, `Z^n`, `trivial`) that must denote `group`.
fn group_name(c: &mut Cursor, group: GroupDescriptor) -> Result<(), SemanticError> {
    let name = match c.peek().clone() {
        Tok::Ident(name) => name,
        _ => return Err(c.unexpected("a region").into()),
    };
    let mismatch = |c: &Cursor, found: &str| -> SemanticError {
        c.error(format!("region `{found}` does not match the group {group}")).into()
    };
    let found = match name.as_str() {
        "G" => {
            c.bump();
            return Ok(());
        }
        "Z" if c.peek_at(1) == &Tok::Sym('^') => {
            let Tok::Number(n) = c.peek_at(2).clone() else {
                c.bump();
                c.bump();
                return Err(c.unexpected("a dimension").into());
            };
            let d: usize = (&n).try_into().unwrap_or(0);
            match group {
                GroupDescriptor::Lex(k) if k == d => None,
                _ => Some(format!("Z^{n}")),
            }
        }
        "Z" => (group != GroupDescriptor::Integers).then(|| name.clone()),
        "Q" => (group != GroupDescriptor::Rationals).then(|| name.clone()),
        "trivial" => (group != GroupDescriptor::Trivial).then(|| name.clone()),
        _ => return Err(c.unexpected("a region").into()),
    };
    if let Some(found) = found {
        return Err(mismatch(c, &found));
    }
    c.bump();
    if c.eat('^') {
        c.bump();
    }
    Ok(())
}
