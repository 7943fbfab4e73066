//! Seeded random generators for well-typed terms, used by the property tests
//! and the examples.
//!
//! Every primitive is an isomorphism, so a generated term has the dimension of
//! the source type it was grown from; `max_dim` bounds that.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lang::{Prim, Term, ValueType};

const ONE_QUBIT: [&str; 10] = ["h", "s", "sdg", "t", "tdg", "x", "z", "v", "k", "id"];
const TWO_QUBIT: [&str; 6] = ["cx", "cz", "ncx", "swap", "ch", "csx"];

pub struct TermGen {
    rng: ChaCha8Rng,
    pub max_dim: usize,
    pub max_depth: usize,
}

impl TermGen {
    pub fn new(seed: u64) -> TermGen {
        TermGen { rng: ChaCha8Rng::seed_from_u64(seed), max_dim: 16, max_depth: 4 }
    }

    pub fn with_limits(seed: u64, max_dim: usize, max_depth: usize) -> TermGen {
        TermGen { max_dim: max_dim.max(1), max_depth, ..TermGen::new(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A type of dimension at most `max_dim`.
    pub fn value_type(&mut self) -> ValueType {
        let d = self.max_dim;
        self.type_upto(d, 3)
    }

    fn type_upto(&mut self, max: usize, depth: usize) -> ValueType {
        let roll = self.rng.gen_range(0..10);
        match roll {
            _ if depth == 0 || max < 2 => {
                if max == 0 || self.rng.gen_bool(0.1) {
                    ValueType::Zero
                } else {
                    ValueType::One
                }
            }
            0 => ValueType::Zero,
            1 => ValueType::One,
            2..=3 => ValueType::two(),
            4..=6 => {
                let a = self.type_upto(max - 1, depth - 1);
                let b = self.type_upto(max - a.dimension(), depth - 1);
                if self.rng.gen() {
                    ValueType::sum(a, b)
                } else {
                    ValueType::sum(b, a)
                }
            }
            _ => {
                let a = self.type_upto(max / 2, depth - 1);
                let b = self.type_upto(max / a.dimension().max(1), depth - 1);
                ValueType::prod(a, b)
            }
        }
    }

    /// Primitives that accept `src`, with their targets.
    fn prims_at(&mut self, src: &ValueType) -> Vec<(Term, ValueType)> {
        use ValueType::*;
        let p = Term::prim;
        let mut out = vec![(p(Prim::Id), src.clone()), (p(Prim::UnitiTimesL), ValueType::prod(One, src.clone()))];
        if src.dimension() <= 4 {
            out.push((p(Prim::UnitiPlusL), ValueType::sum(Zero, src.clone())));
        }
        match src {
            Zero => {
                // `factorzr` cannot infer its left factor, so pin it
                let a = self.type_upto(3, 1);
                let tgt = ValueType::prod(a, Zero);
                out.push((Term::ann(p(Prim::Factorzr), Zero, tgt.clone()), tgt));
            }
            One => {
                out.push((p(Prim::W), One));
                out.push((p(Prim::Wi), One));
            }
            Sum(a, b) => {
                out.push((p(Prim::SwapPlus), ValueType::sum((**b).clone(), (**a).clone())));
                if **a == One && **b == One {
                    out.push((p(Prim::V), src.clone()));
                    out.push((p(Prim::Vi), src.clone()));
                }
                if let Sum(x, y) = &**a {
                    out.push((p(Prim::AssocrPlus), ValueType::sum((**x).clone(), ValueType::sum((**y).clone(), (**b).clone()))));
                }
                if let Sum(y, z) = &**b {
                    out.push((p(Prim::AssoclPlus), ValueType::sum(ValueType::sum((**a).clone(), (**y).clone()), (**z).clone())));
                }
                if **a == Zero {
                    out.push((p(Prim::UnitePlusL), (**b).clone()));
                }
                if let (Prod(x, c1), Prod(y, c2)) = (&**a, &**b) {
                    if c1 == c2 {
                        let tgt = ValueType::prod(ValueType::sum((**x).clone(), (**y).clone()), (**c1).clone());
                        out.push((p(Prim::Factor), tgt));
                    }
                }
            }
            Prod(a, b) => {
                out.push((p(Prim::SwapTimes), ValueType::prod((**b).clone(), (**a).clone())));
                if let Prod(x, y) = &**a {
                    out.push((p(Prim::AssocrTimes), ValueType::prod((**x).clone(), ValueType::prod((**y).clone(), (**b).clone()))));
                }
                if let Prod(y, z) = &**b {
                    out.push((p(Prim::AssoclTimes), ValueType::prod(ValueType::prod((**a).clone(), (**y).clone()), (**z).clone())));
                }
                if **a == One {
                    out.push((p(Prim::UniteTimesL), (**b).clone()));
                }
                if **b == Zero {
                    out.push((p(Prim::Absorbl), Zero));
                }
                if let Sum(x, y) = &**a {
                    let c = (**b).clone();
                    let tgt = ValueType::sum(ValueType::prod((**x).clone(), c.clone()), ValueType::prod((**y).clone(), c));
                    out.push((p(Prim::Dist), tgt));
                }
            }
        }
        out
    }

    /// A term with source `src` and its target type.
    pub fn term_from(&mut self, src: &ValueType, depth: usize) -> (Term, ValueType) {
        let roll = if depth == 0 { 0 } else { self.rng.gen_range(0..8) };
        match (roll, src) {
            (1..=3, _) => {
                let (a, mid) = self.term_from(src, depth - 1);
                let (b, tgt) = self.term_from(&mid, depth - 1);
                (Term::seq(a, b), tgt)
            }
            (4..=5, ValueType::Sum(x, y)) => {
                let (a, ta) = self.term_from(x, depth - 1);
                let (b, tb) = self.term_from(y, depth - 1);
                (Term::sum(a, b), ValueType::sum(ta, tb))
            }
            (4..=5, ValueType::Prod(x, y)) => {
                let (a, ta) = self.term_from(x, depth - 1);
                let (b, tb) = self.term_from(y, depth - 1);
                (Term::prod(a, b), ValueType::prod(ta, tb))
            }
            _ => {
                let opts = self.prims_at(src);
                opts.choose(&mut self.rng).cloned().expect("id always applies")
            }
        }
    }

    /// A closed term annotated with its signature.
    pub fn term(&mut self) -> Term {
        let src = self.value_type();
        let depth = self.max_depth;
        let (t, tgt) = self.term_from(&src, depth);
        Term::ann(t, src, tgt)
    }

    /// A random word of named gates on 1 or 2 qubits, with macros left in place.
    pub fn gate_word(&mut self, qubits: usize, len: usize) -> Term {
        assert!(qubits == 1 || qubits == 2, "gate words are on 1 or 2 qubits");
        let words: Vec<Term> = (0..len.max(1))
            .map(|_| {
                let one = match *ONE_QUBIT.choose(&mut self.rng).unwrap() {
                    "id" => Term::id(),
                    g => Term::name(g),
                };
                if qubits == 1 {
                    return one;
                }
                match self.rng.gen_range(0..3) {
                    0 => Term::prod(one, Term::id()),
                    1 => Term::prod(Term::id(), one),
                    _ => Term::name(TWO_QUBIT.choose(&mut self.rng).unwrap()),
                }
            })
            .collect();
        let ty = ValueType::qubits(qubits);
        Term::ann(Term::seq_all(words), ty.clone(), ty)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{denote, elaborate};

    #[test]
    fn generated_terms_are_well_typed_and_small() {
        let mut g = TermGen::new(7);
        for _ in 0..200 {
            let t = g.term();
            let typed = elaborate(&t, None).unwrap_or_else(|e| panic!("{t}: {e}"));
            assert!(typed.src.dimension() <= 16);
            assert_eq!(typed.src.dimension(), typed.tgt.dimension());
        }
    }

    #[test]
    fn same_seed_same_terms() {
        let mut g = TermGen::new(3);
        let a: Vec<Term> = (0..5).map(|_| g.term()).collect();
        let mut g = TermGen::new(3);
        assert!(a.iter().all(|t| *t == g.term()));
    }

    #[test]
    fn gate_words_evaluate() {
        let mut g = TermGen::new(11);
        for q in [1, 2] {
            let m = denote(&g.gate_word(q, 6), None).unwrap();
            assert_eq!(m.rows(), 1 << q);
            assert!(m.is_unitary());
        }
    }

    #[test]
    fn primitives_get_exercised() {
        let mut g = TermGen::with_limits(5, 8, 5);
        let text: String = (0..300).map(|_| g.term().to_string()).collect();
        for p in ["v", "w", "dist", "swap*", "factorzr", "assocl+"] {
            assert!(text.contains(p), "{p} never generated");
        }
    }
}
