//! Turning config descriptors into library objects.

use std::sync::Arc;

use nilspace::abelian::{height_extension, make_group, Character, FinAbGroup, GroupExtension};
use nilspace::extension::{verify_extension, verify_extension_with_action, Extension};
use nilspace::free::{mod_free_nilspace, PolyMap};
use nilspace::gowers::{coefficient_phases, phase_poly_from_coeffs, project_phase, GroupFunction};
use nilspace::space::{linear_structure, product, GroupSpace, Space};
use nilspace::{Limits, Result};

use crate::config::{ExtensionDesc, FunctionDesc, GroupExtDesc, SpaceDesc, ValueLit};

/// A group literal, refused when larger than the ground budget.
pub fn group(orders: &[i64], limits: &Limits) -> Result<FinAbGroup> {
    let g = make_group(orders)?;
    if g.order() > limits.ground as u64 {
        return Err(nilspace::Error::ResourceLimit {
            what: format!("group of order {}", g.order()),
            budget: limits.ground as u64,
            dim: None,
        });
    }
    Ok(g)
}

/// The space, plus its group form when it has one.
pub fn space(desc: &SpaceDesc, limits: &Limits) -> Result<(Space, Option<GroupSpace>)> {
    let gs = match desc {
        SpaceDesc::Dk { group: g, k } => GroupSpace::dk(group(g, limits)?, *k)?,
        SpaceDesc::Degrees { group: g, degrees } => {
            let g = group(g, limits)?;
            if degrees.len() != g.num_coords() {
                return Err(nilspace::Error::InvalidArgument(
                    "one degree per cyclic factor required".into(),
                ));
            }
            GroupSpace::with_degrees(g, degrees)?
        }
        SpaceDesc::Filtered { group: g, divisors } => {
            GroupSpace::filtered(group(g, limits)?, divisors.clone())?
        }
        SpaceDesc::ModFree { modulus, ranks } => mod_free_nilspace(*modulus, ranks, limits)?,
        SpaceDesc::Linear(g) => return Ok((linear_structure(&group(g, limits)?), None)),
        SpaceDesc::Product(parts) => {
            let mut spaces = Vec::new();
            for p in parts {
                spaces.push(space(p, limits)?.0);
            }
            let first = spaces.first().cloned().ok_or_else(|| {
                nilspace::Error::InvalidArgument("a product needs at least one factor".into())
            })?;
            let prod = spaces.into_iter().skip(1).fold(first, product);
            if prod.size() > limits.ground {
                return Err(nilspace::Error::ResourceLimit {
                    what: format!("product ground set of {} points", prod.size()),
                    budget: limits.ground as u64,
                    dim: None,
                });
            }
            return Ok((prod, None));
        }
    };
    Ok((Arc::new(gs.clone()), Some(gs)))
}

pub fn group_extension(desc: &GroupExtDesc, limits: &Limits) -> Result<GroupExtension> {
    match desc {
        GroupExtDesc::Componentwise { total, base } => {
            GroupExtension::componentwise(&group(total, limits)?, &group(base, limits)?)
        }
        GroupExtDesc::Height { base, height } => {
            let ext = height_extension(&group(base, limits)?, *height)?;
            if ext.total().order() > limits.ground as u64 {
                return Err(nilspace::Error::ResourceLimit {
                    what: format!("extension group of order {}", ext.total().order()),
                    budget: limits.ground as u64,
                    dim: None,
                });
            }
            Ok(ext)
        }
    }
}

/// Degree of the described extension.
pub fn extension_degree(desc: &ExtensionDesc) -> usize {
    match desc {
        ExtensionDesc::Groups { k, .. }
        | ExtensionDesc::Trivial { k, .. }
        | ExtensionDesc::Explicit { k, .. } => *k,
    }
}

/// The certified extension and, when the base is a group structure, that structure.
pub fn extension(
    desc: &ExtensionDesc,
    n_upto: usize,
    limits: &Limits,
) -> Result<(Extension, Option<GroupSpace>)> {
    match desc {
        ExtensionDesc::Groups { groups, k } => {
            let ext = group_extension(groups, limits)?;
            let base = GroupSpace::dk(ext.base().clone(), *k)?;
            Ok((Extension::of_groups(&ext, *k, n_upto, limits)?, Some(base)))
        }
        ExtensionDesc::Trivial { base, group: g, k } => {
            let (b, gs) = space(base, limits)?;
            Ok((
                Extension::trivial(b, &group(g, limits)?, *k, n_upto, limits)?,
                gs,
            ))
        }
        ExtensionDesc::Explicit {
            total,
            base,
            group: g,
            proj,
            k,
            action,
        } => {
            let (m, _) = space(total, limits)?;
            let (b, gs) = space(base, limits)?;
            let g = group(g, limits)?;
            let ext = match action {
                Some(a) => {
                    verify_extension_with_action(m, b, &g, proj, a.clone(), *k, n_upto, limits)?
                }
                None => verify_extension(m, b, &g, proj, *k, n_upto, limits)?,
            };
            Ok((ext, gs))
        }
    }
}

pub fn function(desc: &FunctionDesc, seed: u64, limits: &Limits) -> Result<GroupFunction> {
    match desc {
        FunctionDesc::Values { group: g, values } => {
            let g = group(g, limits)?;
            let exact: Option<Vec<_>> = values
                .iter()
                .map(|v| match v {
                    ValueLit::Phase(p) => Some(*p),
                    ValueLit::Complex(_) => None,
                })
                .collect();
            match exact {
                Some(p) => GroupFunction::from_phases(g, p),
                None => GroupFunction::new(
                    g,
                    values
                        .iter()
                        .map(|v| match v {
                            ValueLit::Phase(p) => p.to_complex(),
                            ValueLit::Complex([re, im]) => num_complex::Complex64::new(*re, *im),
                        })
                        .collect(),
                ),
            }
        }
        FunctionDesc::Constant { group: g, phase } => {
            Ok(GroupFunction::constant(group(g, limits)?, *phase))
        }
        FunctionDesc::Character { group: g, coeffs } => Ok(GroupFunction::from_character(
            &Character::new(group(g, limits)?, coeffs.clone())?,
        )),
        FunctionDesc::Dirac { group: g } => Ok(GroupFunction::dirac(group(g, limits)?)),
        FunctionDesc::Random { group: g, seed: s } => {
            Ok(GroupFunction::random(group(g, limits)?, s.unwrap_or(seed)))
        }
        FunctionDesc::RandomPhases {
            group: g,
            denom,
            seed: s,
        } => GroupFunction::random_phases(group(g, limits)?, *denom, s.unwrap_or(seed)),
        FunctionDesc::Coefficients { group: g, terms } => {
            let g = group(g, limits)?;
            if let Some(t) = terms.iter().find(|t| t.r.len() != g.num_coords()) {
                return Err(nilspace::Error::InvalidArgument(format!(
                    "multi-index {:?} does not match {} coordinates",
                    t.r,
                    g.num_coords()
                )));
            }
            let terms: Vec<_> = terms.iter().map(|t| (t.r.clone(), t.theta)).collect();
            let phases = coefficient_phases(&g, &terms);
            GroupFunction::from_phases(g, phases)
        }
        FunctionDesc::Polymap {
            group: g,
            map,
            character,
        } => {
            let p = PolyMap::from_literal(map)?;
            let chi = Character::new(p.target().clone(), character.clone())?;
            Ok(phase_poly_from_coeffs(&p, &chi, &group(g, limits)?, limits)?.function)
        }
        FunctionDesc::Projected {
            function: f,
            extension,
        } => {
            let ext = group_extension(extension, limits)?;
            project_phase(&function(f, seed, limits)?, &ext)
        }
    }
}
