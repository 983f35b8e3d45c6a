use std::cmp::Ordering;
use std::collections::HashSet;

use workbench_core::ordinal::{
    canonical_notation, compare_notation, fseq_code, fundamental_sequence, path_properties,
    CnfOrdinal, Notation,
};

/// Every ordinal `w^2*a + w*b + c` with coefficients at most 5.
fn below_omega_cubed() -> Vec<CnfOrdinal> {
    let mut out = Vec::new();
    for a in 0..=5u64 {
        for b in 0..=5u64 {
            for c in 0..=5u64 {
                let s = format!("w^2*{a} + w*{b} + {c}");
                out.push(s.parse().unwrap());
            }
        }
    }
    out
}

#[test]
fn canonical_notation_is_injective_and_order_preserving() {
    let ords = below_omega_cubed();
    let notations: Vec<Notation> = ords
        .iter()
        .map(|a| canonical_notation(a).unwrap())
        .collect();
    let codes: HashSet<_> = notations.iter().map(Notation::numeral).collect();
    assert_eq!(codes.len(), ords.len());
    for (a, na) in ords.iter().zip(&notations) {
        for (b, nb) in ords.iter().zip(&notations) {
            assert_eq!(compare_notation(na, nb), a.cmp(b), "{a} vs {b}");
        }
    }
}

#[test]
fn programs_enumerate_canonical_fundamental_sequences() {
    for l in below_omega_cubed().into_iter().filter(CnfOrdinal::is_limit) {
        let Notation::Lim { fseq, semantic } = canonical_notation(&l).unwrap() else {
            panic!("{l} is a limit");
        };
        assert_eq!(semantic, l);
        for n in 0..3u64 {
            let got = fseq_code(&fseq, n, 5_000_000).unwrap().expect("halts");
            let term = fundamental_sequence(&l, n).unwrap();
            assert!(term < l);
            assert!(term < fundamental_sequence(&l, n + 1).unwrap());
            assert_eq!(got, canonical_notation(&term).unwrap().code(), "{l}[{n}]");
        }
    }
}

#[test]
fn higher_exponents() {
    for s in ["w^w", "w^(w + 1)", "w^w*2 + w^3"] {
        let l: CnfOrdinal = s.parse().unwrap();
        let bound: CnfOrdinal = "w^(w*2)".parse().unwrap();
        let n = workbench_core::ordinal::canonical_notation_below(&l, &bound).unwrap();
        let Notation::Lim { fseq, .. } = n else {
            panic!()
        };
        for k in 0..3u64 {
            let got = fseq_code(&fseq, k, 5_000_000).unwrap().expect("halts");
            let term = fundamental_sequence(&l, k).unwrap();
            let want = workbench_core::ordinal::canonical_notation_below(&term, &bound).unwrap();
            assert_eq!(got, want.code(), "{s}[{k}]");
        }
    }
}

#[test]
fn path_examples() {
    let chain: Vec<Notation> = (0..=5u64)
        .map(|k| canonical_notation(&CnfOrdinal::nat(k)).unwrap())
        .collect();
    assert!(path_properties(&chain, 3, 10_000).holds());

    let gap: Vec<Notation> = chain
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != 2)
        .map(|(_, n)| n.clone())
        .collect();
    let report = path_properties(&gap, 3, 10_000);
    assert_eq!(report.closure_violations, vec![(2, None)]);

    let w = canonical_notation(&CnfOrdinal::omega()).unwrap();
    let Notation::Lim { fseq, semantic } = &w else {
        panic!()
    };
    // a second program with the same outputs: specialise away nothing, pad a no-op
    let mut p = fseq.program();
    p.instructions
        .insert(0, workbench_core::machine::Instruction::Zero(50));
    for ins in p.instructions.iter_mut().skip(1) {
        *ins = ins.relocated(1);
    }
    let other = Notation::Lim {
        fseq: workbench_core::machine::encode_program(&p),
        semantic: semantic.clone(),
    };
    assert_ne!(other, w);
    let mut members = chain.clone();
    members.push(w);
    members.push(other);
    let report = path_properties(&members, 3, 100_000);
    assert_eq!(report.uniqueness_violations, vec![(6, 7)]);
    assert!(report.closure_violations.is_empty());
    assert_eq!(compare_notation(&members[6], &members[7]), Ordering::Equal);
}
