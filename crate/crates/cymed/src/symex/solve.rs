//! Bounded constraint solving by pruned enumeration.
//!
//! Sound and complete over the byte domain: single-variable constraints
//! first shrink each variable's feasible set, then backtracking search
//! assigns variables in index order, checking every constraint as soon as
//! its last variable is bound. No widening, no approximation — a returned
//! `None` means definitely unsatisfiable within the bound.

use super::expr::{PathCondition, MAX_INPUT_VARS};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("solver domain of {requested} input bytes exceeds the bound of {max}", max = MAX_INPUT_VARS)]
pub struct DomainTooLarge {
    pub requested: usize,
}

/// Find a satisfying input-byte assignment, or prove there is none.
pub fn solve(
    pc: &PathCondition,
    max_input_bytes: usize,
) -> Result<Option<Vec<u8>>, DomainTooLarge> {
    solve_where(pc, max_input_bytes, |_| true)
}

/// Like [`solve`] but the witness must also satisfy an arbitrary predicate
/// (used for "indirect jump target lands out of range" queries).
pub fn solve_where(
    pc: &PathCondition,
    max_input_bytes: usize,
    predicate: impl Fn(&[u8]) -> bool,
) -> Result<Option<Vec<u8>>, DomainTooLarge> {
    if max_input_bytes > MAX_INPUT_VARS {
        return Err(DomainTooLarge {
            requested: max_input_bytes,
        });
    }
    let n = max_input_bytes;

    // Per-variable feasible sets from single-variable constraints.
    let mut domains: Vec<Vec<u8>> = Vec::with_capacity(n);
    for var in 0..n {
        let single: Vec<_> = pc
            .constraints
            .iter()
            .filter(|c| c.vars() == [var])
            .collect();
        let mut feasible = Vec::with_capacity(256);
        let mut probe = [0u8; MAX_INPUT_VARS];
        for value in 0..=255u8 {
            probe[var] = value;
            if single.iter().all(|c| c.holds(&probe[..n])) {
                feasible.push(value);
            }
        }
        if feasible.is_empty() {
            return Ok(None);
        }
        domains.push(feasible);
    }

    // Constraints indexed by the highest variable they mention; checked the
    // moment that variable gets a value. Var-free constraints decide between
    // ⊤ and ⊥ immediately.
    let mut by_last_var: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in pc.constraints.iter().enumerate() {
        let vars = c.vars();
        match vars.last() {
            None => {
                if !c.holds(&[]) {
                    return Ok(None);
                }
            }
            Some(&last) => {
                debug_assert!(
                    last < n,
                    "constraint references variable outside the domain"
                );
                if vars.len() > 1 {
                    by_last_var[last].push(i);
                }
            }
        }
    }

    let mut assignment = vec![0u8; n];
    if backtrack(pc, &domains, &by_last_var, &mut assignment, 0, &predicate) {
        return Ok(Some(assignment));
    }
    Ok(None)
}

fn backtrack(
    pc: &PathCondition,
    domains: &[Vec<u8>],
    by_last_var: &[Vec<usize>],
    assignment: &mut Vec<u8>,
    var: usize,
    predicate: &impl Fn(&[u8]) -> bool,
) -> bool {
    if var == domains.len() {
        return predicate(assignment);
    }
    for &value in &domains[var] {
        assignment[var] = value;
        let consistent = by_last_var[var]
            .iter()
            .all(|&i| pc.constraints[i].holds(assignment));
        if consistent && backtrack(pc, domains, by_last_var, assignment, var + 1, predicate) {
            return true;
        }
    }
    assignment[var] = 0;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symex::expr::{CmpOp, Constraint, LinExpr};

    fn eq(lhs: LinExpr, rhs: LinExpr) -> Constraint {
        Constraint {
            lhs,
            op: CmpOp::Eq,
            rhs,
        }
    }

    #[test]
    fn single_equality_pins_the_byte() {
        let pc = PathCondition::default().with(eq(LinExpr::var(0), LinExpr::constant(65)));
        assert_eq!(solve(&pc, 1).unwrap(), Some(vec![65]));
    }

    #[test]
    fn contradiction_is_unsat() {
        let pc = PathCondition::default()
            .with(Constraint {
                lhs: LinExpr::var(0),
                op: CmpOp::Lt,
                rhs: LinExpr::constant(10),
            })
            .with(Constraint {
                lhs: LinExpr::var(0),
                op: CmpOp::Ge,
                rhs: LinExpr::constant(10),
            });
        assert_eq!(solve(&pc, 1).unwrap(), None);
    }

    #[test]
    fn byte_maxima_force_unique_sum() {
        // x0 + x1 = 510 only at [255, 255].
        let sum = LinExpr::var(0).add(&LinExpr::var(1));
        let pc = PathCondition::default().with(eq(sum, LinExpr::constant(510)));
        assert_eq!(solve(&pc, 2).unwrap(), Some(vec![255, 255]));
    }

    #[test]
    fn unconstrained_variables_default_to_zero() {
        let pc = PathCondition::default().with(eq(LinExpr::var(1), LinExpr::constant(7)));
        assert_eq!(solve(&pc, 3).unwrap(), Some(vec![0, 7, 0]));
    }

    #[test]
    fn domain_bound_is_enforced() {
        let pc = PathCondition::default();
        assert_eq!(solve(&pc, 5), Err(DomainTooLarge { requested: 5 }));
        assert!(solve(&pc, 4).unwrap().is_some());
    }

    #[test]
    fn predicate_narrows_the_search() {
        let pc = PathCondition::default().with(Constraint {
            lhs: LinExpr::var(0),
            op: CmpOp::Ge,
            rhs: LinExpr::constant(100),
        });
        let witness = solve_where(&pc, 1, |asg| asg[0] % 2 == 1).unwrap().unwrap();
        assert!(witness[0] >= 100 && witness[0] % 2 == 1);
    }

    #[test]
    fn solver_agrees_with_brute_force_on_random_conditions() {
        // Oracle: plain enumeration of all two-byte inputs.
        let mut seed = 0x1234_5678_9ABC_DEFFu64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..200 {
            let mut pc = PathCondition::default();
            for _ in 0..(next() % 4) {
                let lhs = match next() % 3 {
                    0 => LinExpr::var(0),
                    1 => LinExpr::var(1),
                    _ => LinExpr::var(0).add(&LinExpr::var(1)),
                };
                let op = match next() % 4 {
                    0 => CmpOp::Eq,
                    1 => CmpOp::Ne,
                    2 => CmpOp::Lt,
                    _ => CmpOp::Ge,
                };
                let rhs = LinExpr::constant(next() % 600);
                pc = pc.with(Constraint { lhs, op, rhs });
            }
            let solved = solve(&pc, 2).unwrap();
            let brute = (0..=255u8)
                .flat_map(|a| (0..=255u8).map(move |b| [a, b]))
                .find(|asg| pc.holds(asg));
            assert_eq!(solved.is_some(), brute.is_some(), "pc = {}", pc.describe());
            if let Some(w) = solved {
                assert!(pc.holds(&w), "witness must satisfy: pc = {}", pc.describe());
            }
        }
    }
}
