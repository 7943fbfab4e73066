mod support;

use proptest::prelude::*;

use sqrtpi::circuits::place;
use sqrtpi::exactnum::{Cyclo, Dyadic};
use sqrtpi::gates;
use sqrtpi::lang::{invert, parse, Term, ValueType};
use sqrtpi::rewrite::{normalize, Rewriter};
use sqrtpi::semantics::{adjoint, equal_matrices, eval, kronecker, ExactMatrix, MatrixEq, PhaseMode};
use sqrtpi::testing::TermGen;
use sqrtpi::{denote, elaborate};

use support::{mat_of, num_of, Mat, Num};

fn cyclo() -> impl Strategy<Value = Cyclo> {
    (prop::array::uniform4(-40i64..40), 0u32..5).prop_map(|(c, k)| Cyclo::from_ints(c, k))
}

fn closed(seed: u64) -> Term {
    TermGen::with_limits(seed, 8, 4).term()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclo_ops_agree_with_reference(a in cyclo(), b in cyclo()) {
        prop_assert_eq!(num_of(&(&a + &b)), &num_of(&a) + &num_of(&b));
        prop_assert_eq!(num_of(&(&a * &b)), &num_of(&a) * &num_of(&b));
        prop_assert_eq!(num_of(&(&a - &b)), &num_of(&a) - &num_of(&b));
        prop_assert_eq!(num_of(&a.conjugate()), num_of(&a).conj());
    }

    #[test]
    fn cyclo_ring_laws(a in cyclo(), b in cyclo(), c in cyclo()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &(-&a), Cyclo::zero());
        prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
    }

    #[test]
    fn omega_powers_add(m in -20i64..20, n in -20i64..20) {
        prop_assert_eq!(Cyclo::omega_pow(m + n), &Cyclo::omega_pow(m) * &Cyclo::omega_pow(n));
        prop_assert_eq!(num_of(&Cyclo::omega_pow(m)), Num::omega_pow(m));
        prop_assert_eq!(Cyclo::omega_pow(m).mul_omega_pow(n), Cyclo::omega_pow(m + n));
    }

    #[test]
    fn dyadics_reduce(n in -1000i64..1000, k in 0u32..8) {
        let d = Dyadic::new(n << k, k);
        prop_assert_eq!(d, Dyadic::from_int(n));
    }

    #[test]
    fn generated_terms_denote_unitaries(seed in any::<u64>()) {
        let t = closed(seed);
        let typed = elaborate(&t, None).unwrap();
        let m = eval(&typed);
        prop_assert!(m.is_unitary());
        prop_assert_eq!(mat_of(&m), support::eval(&typed));
    }

    #[test]
    fn invert_is_an_involution_and_the_adjoint(seed in any::<u64>()) {
        let t = closed(seed);
        prop_assert_eq!(invert(&invert(&t)), t.clone());
        let m = denote(&t, None).unwrap();
        let inv = elaborate(&invert(&t), None).unwrap();
        prop_assert_eq!(eval(&inv), adjoint(&m));
        let ty = elaborate(&t, None).unwrap();
        prop_assert_eq!((inv.src, inv.tgt), (ty.tgt, ty.src));
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let t = closed(seed);
        let back = parse(&t.to_string()).unwrap();
        prop_assert_eq!(normalize(&back), normalize(&t));
        prop_assert_eq!(parse(&t.pretty()).map(|p| normalize(&p)).ok(), Some(normalize(&t)));
    }

    #[test]
    fn normalize_is_idempotent_and_sound(seed in any::<u64>()) {
        let t = closed(seed);
        let n = normalize(&t);
        prop_assert_eq!(normalize(&n), n.clone());
        prop_assert_eq!(denote(&n, None).unwrap(), denote(&t, None).unwrap());
    }

    #[test]
    fn interchange_law(seed in any::<u64>()) {
        let mut g = TermGen::with_limits(seed, 4, 2);
        let (x, y) = (g.value_type(), g.value_type());
        let (a, x1) = g.term_from(&x, 2);
        let (b, x2) = g.term_from(&x1, 2);
        let (c, y1) = g.term_from(&y, 2);
        let (d, y2) = g.term_from(&y1, 2);
        for times in [true, false] {
            let op = |l: Term, r: Term| if times { Term::prod(l, r) } else { Term::sum(l, r) };
            let (src, tgt) = if times {
                (ValueType::prod(x.clone(), y.clone()), ValueType::prod(x2.clone(), y2.clone()))
            } else {
                (ValueType::sum(x.clone(), y.clone()), ValueType::sum(x2.clone(), y2.clone()))
            };
            let lhs = op(Term::seq(a.clone(), b.clone()), Term::seq(c.clone(), d.clone()));
            let rhs = Term::seq(op(a.clone(), c.clone()), op(b.clone(), d.clone()));
            let sig = Some((&src, &tgt));
            prop_assert_eq!(denote(&lhs, sig).unwrap(), denote(&rhs, sig).unwrap());
        }
    }

    #[test]
    fn matrix_json_round_trips(seed in any::<u64>()) {
        let m = denote(&closed(seed), None).unwrap();
        prop_assert_eq!(ExactMatrix::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn phase_is_detected(seed in any::<u64>(), k in 0i64..8) {
        let m = denote(&closed(seed), None).unwrap();
        prop_assume!(m.rows() > 0);
        let expected = if k == 0 { MatrixEq::Equal } else { MatrixEq::EqualWithPhase(k as u8) };
        let got = equal_matrices(&m.scale_omega(k), &m, PhaseMode::UpToOmegaPower);
        prop_assert_eq!(got, expected);
        if k != 0 {
            prop_assert_eq!(equal_matrices(&m.scale_omega(k), &m, PhaseMode::Strict), MatrixEq::NotEqual);
        }
    }

    #[test]
    fn scalar_multiplication_scales(seed in any::<u64>(), k in -9i32..9) {
        let t = closed(seed);
        let m = denote(&t, None).unwrap();
        let ty = elaborate(&t, None).unwrap();
        let sig = Some((&ty.src, &ty.tgt));
        let left = denote(&gates::scalar_mul(gates::omega(k), t.clone()), sig).unwrap();
        let right = denote(&gates::scalar_mul_right(t.clone(), gates::omega(k)), sig).unwrap();
        prop_assert_eq!(&left, &m.scale_omega(k as i64));
        prop_assert_eq!(&right, &m.scale_omega(k as i64));
    }

    #[test]
    fn placement_ignores_an_appended_wire(g in prop::sample::select(vec!["x", "z", "s", "t", "h", "k", "cx", "cz", "ch", "swap"]), n in 2usize..4, w0 in 0usize..3, w1 in 0usize..3) {
        let gate = gates::named_gate(g).unwrap();
        let wires: Vec<usize> = if gates::gate_arity(g) == Some(1) { vec![w0 % n] } else { vec![w0 % n, w1 % n] };
        prop_assume!(wires.len() == 1 || wires[0] != wires[1]);
        let small = denote(&place(gate.clone(), &wires, n), None).unwrap();
        let big = denote(&place(gate, &wires, n + 1), None).unwrap();
        prop_assert_eq!(big, kronecker(&small, &ExactMatrix::identity(2)));
    }

    #[test]
    fn simplify_traces_are_sound(seed in any::<u64>(), q in 1usize..3) {
        let mut g = TermGen::new(seed);
        let t = if seed % 2 == 0 { g.gate_word(q, 4) } else { closed(seed) };
        let rw = Rewriter::default();
        let tr = rw.simplify(&t, None, 15).unwrap();
        let sig = (&tr.signature.0, &tr.signature.1);
        let mut prev = denote(&tr.start, Some(sig)).unwrap();
        for s in &tr.steps {
            let next = denote(&s.term, Some(sig)).unwrap();
            prop_assert_eq!(&prev, &next.scale_omega(s.phase as i64), "{} at {:?}", s.rule, s.path);
            prev = next;
        }
        let start = support::eval(&elaborate(&tr.start, Some(sig)).unwrap());
        let end = mat_of(&prev).times(&Num::omega_pow(tr.total_phase() as i64));
        prop_assert_eq!(start, end);
    }
}

#[test]
fn reference_gates_are_unitary() {
    for m in [support::x(), support::z(), support::s(), support::t(), support::h(), support::v(), support::csx()] {
        assert!(m.is_unitary());
    }
    assert_eq!(support::t().pow(2), support::s());
    assert_eq!(support::csx().dot(&support::csxdg()), Mat::identity(4));
}
