use std::collections::HashMap;
use std::rc::Rc;

use super::matrix::{compose, direct_sum, kronecker, ExactMatrix};
use crate::exactnum::Cyclo;
use crate::lang::{Prim, Typed, TypedNode, ValueType};

/// The matrix of `v`: `(1/2)[[-1+i, -1-i], [-1-i, -1+i]]`.
pub fn v_matrix() -> ExactMatrix {
    let a = Cyclo::from_ints([-1, 0, 1, 0], 1);
    let b = Cyclo::from_ints([-1, 0, -1, 0], 1);
    ExactMatrix::from_entries(2, 2, vec![a.clone(), b.clone(), b, a])
}

fn prim_matrix(p: Prim, src: &ValueType) -> ExactMatrix {
    match p {
        Prim::SwapPlus => {
            let ValueType::Sum(a, b) = src else { unreachable!("swap+ at a sum type") };
            let (n1, n2) = (a.dimension(), b.dimension());
            let perm: Vec<usize> = (0..n1).map(|i| n2 + i).chain(0..n2).collect();
            ExactMatrix::permutation(&perm)
        }
        Prim::SwapTimes => {
            let ValueType::Prod(a, b) = src else { unreachable!("swap* at a product type") };
            let (n1, n2) = (a.dimension(), b.dimension());
            let mut perm = vec![0; n1 * n2];
            for i in 0..n1 {
                for j in 0..n2 {
                    perm[i * n2 + j] = j * n1 + i;
                }
            }
            ExactMatrix::permutation(&perm)
        }
        Prim::V => v_matrix(),
        Prim::Vi => v_matrix().pow(3),
        Prim::W => ExactMatrix::scalar(Cyclo::omega_pow(1)),
        Prim::Wi => ExactMatrix::scalar(Cyclo::omega_pow(7)),
        // associators, unitors and distributors are strict
        _ => ExactMatrix::identity(src.dimension()),
    }
}

fn go<'a>(t: &'a Typed, memo: &mut HashMap<&'a Typed, Rc<ExactMatrix>>) -> Rc<ExactMatrix> {
    if let Some(m) = memo.get(t) {
        return m.clone();
    }
    let m = match &t.node {
        TypedNode::Prim(p) => prim_matrix(*p, &t.src),
        TypedNode::Seq(a, b) => compose(&go(b, memo), &go(a, memo)),
        TypedNode::Sum(a, b) => direct_sum(&go(a, memo), &go(b, memo)),
        TypedNode::Prod(a, b) => kronecker(&go(a, memo), &go(b, memo)),
    };
    let m = Rc::new(m);
    memo.insert(t, m.clone());
    m
}

/// Denotation of a typed combinator. Repeated identical subterms are evaluated once.
pub fn eval(t: &Typed) -> ExactMatrix {
    let mut memo = HashMap::new();
    let m = go(t, &mut memo);
    drop(memo);
    Rc::try_unwrap(m).unwrap_or_else(|rc| (*rc).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, parse_type, typecheck};
    use crate::semantics::{adjoint, equal_matrices, MatrixEq, PhaseMode};

    fn ev(s: &str) -> ExactMatrix {
        eval(&typecheck(&parse(s).unwrap(), None).unwrap())
    }

    fn ev_at(s: &str, ty: &str) -> ExactMatrix {
        let t = parse_type(ty).unwrap();
        eval(&typecheck(&parse(s).unwrap(), Some((&t, &t))).unwrap())
    }

    #[test]
    fn axioms() {
        assert!(ev("w ; w ; w ; w ; w ; w ; w ; w").is_identity());
        assert_eq!(ev("v ; v"), ev_at("swap+", "2"));
        let lhs = ev("v ; (id + (w ; w)) ; v");
        let rhs = ev("uniti*l ; ((w ; w) * ((id + (w ; w)) ; v ; (id + (w ; w)))) ; unite*l");
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn vi_is_the_adjoint_of_v() {
        assert_eq!(ev("vi"), adjoint(&v_matrix()));
        assert!(ev("v ; vi").is_identity());
    }

    #[test]
    fn swaps_are_the_expected_permutations() {
        let s = ev_at("swap*", "2 * 2");
        assert_eq!(s, ExactMatrix::permutation(&[0, 2, 1, 3]));
        let t = parse("swap+").unwrap();
        let (a, b) = (parse_type("1 + 2").unwrap(), parse_type("2 + 1").unwrap());
        let m = eval(&typecheck(&t, Some((&a, &b))).unwrap());
        assert_eq!(m, ExactMatrix::permutation(&[2, 0, 1]));
    }

    #[test]
    fn structural_isos_are_identities() {
        assert!(ev_at("dist ; factor", "(1 + 1) * 2").is_identity());
        assert!(ev("(dist : (1 + 1) * 2 <-> 1 * 2 + 1 * 2)").is_identity());
        assert_eq!(ev("(absorbl : 2 * 0 <-> 0)").rows(), 0);
    }

    #[test]
    fn scalar_whiskering_multiplies_by_phase() {
        let m = ev("uniti*l ; (w * v) ; unite*l");
        assert_eq!(equal_matrices(&m, &v_matrix(), PhaseMode::UpToOmegaPower), MatrixEq::EqualWithPhase(1));
    }
}
