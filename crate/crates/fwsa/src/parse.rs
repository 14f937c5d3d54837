//! Text grammars for groups, elements, labeled sets, and module
//! expressions.
//!
//! Group specs: `1` for the trivial group, otherwise `Z<n>` factors joined
//! by `x`, as in `Z2xZ4`. Element literals: dot-separated coordinates
//! `c1.c2.....ck`, one per cyclic factor, `0` for the trivial group.
//! Labeled sets: comma-separated element literals, the empty string for the
//! empty set. Module expressions: a prefix grammar over `:`-separated
//! tokens (`zero`, `v0tilde`, `v0bar`, `ppx:<labels>`, `shift:<a>:<inner>`,
//! `conv:<left>:<right>`, `coinv:<inner>`, `push:<inner>`,
//! `fourier:<inner>`, `restrict:<inner>`) matching the strings
//! `Module::describe` emits.

use crate::category::{Category, CategoryTag, LabeledSet};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::module::Module;
use crate::{Error, Result};

/// Nesting bound for module expressions; inputs deeper than this are
/// rejected instead of exhausting the stack.
const MAX_DEPTH: usize = 64;

fn decimal(token: &str, field: &'static str) -> Result<u64> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse {
            field,
            token: token.to_string(),
        });
    }
    token.parse().map_err(|_| Error::Parse {
        field,
        token: token.to_string(),
    })
}

/// Parses a group spec: `1`, or `Z<n>` factors joined by `x` with n >= 2.
pub fn parse_group(spec: &str) -> Result<FiniteAbelianGroup> {
    let spec = spec.trim();
    if spec == "1" {
        return Ok(FiniteAbelianGroup::trivial());
    }
    if spec.is_empty() {
        return Err(Error::Parse {
            field: "group",
            token: spec.to_string(),
        });
    }
    let mut orders = Vec::new();
    for part in spec.split('x') {
        let digits = part.strip_prefix('Z').ok_or(Error::Parse {
            field: "group",
            token: part.to_string(),
        })?;
        orders.push(decimal(digits, "group")?);
    }
    if orders
        .iter()
        .try_fold(1u64, |acc, &n| acc.checked_mul(n))
        .is_none()
    {
        return Err(Error::Validation("group order overflows".to_string()));
    }
    FiniteAbelianGroup::new(orders)
}

/// Parses an element literal `c1.c2.....ck` into an element index.
pub fn parse_element(token: &str, group: &FiniteAbelianGroup) -> Result<usize> {
    let token = token.trim();
    if group.is_trivial() {
        return if token == "0" {
            Ok(0)
        } else {
            Err(Error::Parse {
                field: "element",
                token: token.to_string(),
            })
        };
    }
    let mut coords = Vec::new();
    for part in token.split('.') {
        coords.push(decimal(part, "element")?);
    }
    group.index_of(&GroupElement { coords })
}

/// Parses a comma-separated list of element literals into a labeled set;
/// the empty string denotes the empty set.
pub fn parse_labels(spec: &str, group: &FiniteAbelianGroup) -> Result<LabeledSet> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(LabeledSet::new(Vec::new()));
    }
    let mut labels = Vec::new();
    for token in spec.split(',') {
        labels.push(parse_element(token, group)?);
    }
    Ok(LabeledSet::new(labels))
}

/// Parses a module expression. Leaf constructors that do not fix their own
/// category (`zero`, `ppx`) are built over `leaf_tag`; derived constructors
/// move between categories on their own.
pub fn parse_module(
    spec: &str,
    group: &FiniteAbelianGroup,
    leaf_tag: CategoryTag,
) -> Result<Module> {
    let tokens: Vec<&str> = spec.trim().split(':').collect();
    let mut pos = 0usize;
    let m = parse_expr(&tokens, &mut pos, group, leaf_tag, 0)?;
    if pos != tokens.len() {
        return Err(Error::Parse {
            field: "module",
            token: tokens[pos].to_string(),
        });
    }
    Ok(m)
}

fn next_token<'a>(tokens: &[&'a str], pos: &mut usize) -> Result<&'a str> {
    let t = tokens.get(*pos).copied().ok_or(Error::Parse {
        field: "module",
        token: "<end>".to_string(),
    })?;
    *pos += 1;
    Ok(t)
}

fn parse_expr(
    tokens: &[&str],
    pos: &mut usize,
    group: &FiniteAbelianGroup,
    leaf_tag: CategoryTag,
    depth: usize,
) -> Result<Module> {
    if depth > MAX_DEPTH {
        return Err(Error::Validation(
            "module expression nested too deeply".to_string(),
        ));
    }
    let head = next_token(tokens, pos)?;
    match head {
        "zero" => Ok(Module::zero(Category::new(group.clone(), leaf_tag))),
        "v0tilde" => Ok(Module::v0_tilde(group.clone())),
        "v0bar" => Ok(Module::v0_bar(group.clone())),
        "ppx" => {
            let apex = parse_labels(next_token(tokens, pos)?, group)?;
            Module::projective(Category::new(group.clone(), leaf_tag), apex)
        }
        "shift" => {
            let a = parse_element(next_token(tokens, pos)?, group)?;
            let inner = parse_expr(tokens, pos, group, leaf_tag, depth + 1)?;
            inner.shift(a)
        }
        "conv" => {
            let left = parse_expr(tokens, pos, group, leaf_tag, depth + 1)?;
            let right = parse_expr(tokens, pos, group, leaf_tag, depth + 1)?;
            left.convolve(&right)
        }
        "coinv" => parse_expr(tokens, pos, group, leaf_tag, depth + 1)?.coinvariants(),
        "push" => parse_expr(tokens, pos, group, leaf_tag, depth + 1)?.pushforward(),
        "fourier" => parse_expr(tokens, pos, group, leaf_tag, depth + 1)?.fourier(),
        "restrict" => parse_expr(tokens, pos, group, leaf_tag, depth + 1)?.restrict_fws(),
        other => Err(Error::Parse {
            field: "module",
            token: other.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(vec![2]).unwrap()
    }

    #[test]
    fn group_grammar_accepts_products() {
        assert!(parse_group("1").unwrap().is_trivial());
        let g = parse_group("Z2xZ4").unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.exponent(), 4);
        let h = parse_group(" Z6 ").unwrap();
        assert_eq!(h.order(), 6);
        assert_eq!(h.exponent(), 6);
    }

    #[test]
    fn group_grammar_rejects_junk() {
        for bad in ["", "Z", "2", "z2", "Z2x", "xZ2", "Z2xQ3", "Z+2", "Z2 Z3"] {
            assert!(
                matches!(parse_group(bad), Err(Error::Parse { field: "group", .. })),
                "{bad:?} should be a parse error"
            );
        }
        assert!(matches!(parse_group("Z1"), Err(Error::Validation(_))));
        assert!(parse_group("Z18446744073709551615xZ18446744073709551615").is_err());
    }

    #[test]
    fn element_literals_round_trip() {
        let g = z2();
        assert_eq!(parse_element("0", &g).unwrap(), 0);
        assert_eq!(parse_element("1", &g).unwrap(), 1);
        assert!(parse_element("2", &g).is_err());
        let p = parse_group("Z2xZ2").unwrap();
        for idx in 0..p.order() {
            assert_eq!(parse_element(&p.literal(idx), &p).unwrap(), idx);
        }
        assert!(parse_element("1", &p).is_err());
        assert!(parse_element("a.b", &p).is_err());
        let t = FiniteAbelianGroup::trivial();
        assert_eq!(parse_element("0", &t).unwrap(), 0);
        assert!(parse_element("1", &t).is_err());
    }

    #[test]
    fn label_lists_round_trip() {
        let g = z2();
        assert_eq!(parse_labels("", &g).unwrap(), LabeledSet::new(vec![]));
        assert_eq!(
            parse_labels("1,1,0", &g).unwrap(),
            LabeledSet::new(vec![1, 1, 0])
        );
        let p = parse_group("Z2xZ3").unwrap();
        let x = LabeledSet::new(vec![0, 5, 2]);
        assert_eq!(parse_labels(&x.literal(&p), &p).unwrap(), x);
    }

    #[test]
    fn module_expressions_round_trip_describe() {
        let g = z2();
        let cat = Category::new(g.clone(), CategoryTag::Tws);
        let p = Module::projective(cat, LabeledSet::new(vec![1, 1])).unwrap();
        let cases = vec![
            Module::v0_bar(g.clone()),
            Module::v0_tilde(g.clone()),
            Module::zero(Category::new(g.clone(), CategoryTag::Tws)),
            p.clone(),
            Module::v0_bar(g.clone()).shift(1).unwrap(),
            p.convolve(&Module::v0_tilde(g.clone())).unwrap(),
            Module::v0_bar(g.clone()).coinvariants().unwrap(),
            Module::v0_bar(g.clone())
                .coinvariants()
                .unwrap()
                .pushforward()
                .unwrap(),
            Module::v0_bar(g.clone()).restrict_fws().unwrap(),
        ];
        for m in cases {
            let spec = m.describe();
            let parsed = parse_module(&spec, &g, CategoryTag::Tws).unwrap();
            assert_eq!(parsed.describe(), spec);
            assert_eq!(parsed.category(), m.category());
        }
        let fsa = Category::new(g.clone(), CategoryTag::FsA);
        let q = Module::projective(fsa, LabeledSet::zero(2)).unwrap();
        let f = q.fourier().unwrap();
        let parsed = parse_module(&f.describe(), &g, CategoryTag::FsA).unwrap();
        assert_eq!(parsed.describe(), f.describe());
    }

    #[test]
    fn module_leaf_category_is_configurable() {
        let t = FiniteAbelianGroup::trivial();
        let m = parse_module("ppx:0,0", &t, CategoryTag::Fs).unwrap();
        assert_eq!(m.category().tag(), CategoryTag::Fs);
        assert_eq!(m.dim(&LabeledSet::zero(3)), 6);
        let empty = parse_module("ppx:", &t, CategoryTag::Fs).unwrap();
        assert_eq!(empty.describe(), "ppx:");
    }

    #[test]
    fn module_grammar_rejects_junk() {
        let g = z2();
        for bad in ["", "blah", "v0bar:extra", "shift:1", "conv:v0bar", "ppx"] {
            assert!(
                parse_module(bad, &g, CategoryTag::Tws).is_err(),
                "{bad:?} should fail"
            );
        }
        // Ill-typed composites surface constructor errors, not panics.
        assert!(parse_module("coinv:ppx:1,1", &g, CategoryTag::Fws).is_err());
        // Nesting beyond the bound is rejected.
        let deep = format!("{}v0bar", "shift:1:".repeat(100));
        assert!(parse_module(&deep, &g, CategoryTag::Tws).is_err());
    }
}
