use crate::scheme::{is_subtensor, parabolics, quotient, restriction, ParabolicSet, Scheme, SchemeError};

fn is_trivial_of_degree(x: &Scheme, p: usize) -> bool {
    x.n() == p && x.rank() == 2
}

/// A nontrivial parabolic whose classes and quotient are trivial schemes of
/// degree `p`, in a scheme of rank 3: the wreath product of two trivial
/// schemes of degree `p`.
pub(crate) fn find_wreath(x: &Scheme, p: usize) -> Result<Option<ParabolicSet>, SchemeError> {
    if x.rank() != 3 || x.n() != p * p {
        return Ok(None);
    }
    for e in parabolics(x)? {
        if e.is_trivial(x) || e.num_classes() != p {
            continue;
        }
        if is_trivial_of_degree(&quotient(x, &e)?, p)
            && is_trivial_of_degree(&restriction(x, &e, 0)?, p)
        {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// The first pair of parabolics with `p` classes each, trivial quotients,
/// for which the scheme is a subtensor product.
pub(crate) fn find_subtensor(
    x: &Scheme,
    p: usize,
) -> Result<Option<(ParabolicSet, ParabolicSet)>, SchemeError> {
    if x.n() != p * p {
        return Ok(None);
    }
    let mut candidates = Vec::new();
    for e in parabolics(x)? {
        if !e.is_trivial(x) && e.num_classes() == p && is_trivial_of_degree(&quotient(x, &e)?, p) {
            candidates.push(e);
        }
    }
    for i in 0..candidates.len() {
        for j in i + 1..candidates.len() {
            if is_subtensor(x, &candidates[i], &candidates[j]) {
                return Ok(Some((candidates[i].clone(), candidates[j].clone())));
            }
        }
    }
    Ok(None)
}
