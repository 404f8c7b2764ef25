use std::sync::OnceLock;

use hypergrowth::presentation::{equal, kb_complete, CompletionLimits, GroupOracle, Presentation, RewritingSystem};
use hypergrowth::words::{enumerate_reduced, reduce, Alphabet, Letter, Word};
use proptest::prelude::*;

const GENUS2: &str = include_str!("../presentations/genus2.grp");
const Z2: &str = include_str!("../presentations/z2.grp");

fn system(text: &str) -> RewritingSystem {
    kb_complete(&Presentation::parse(text).unwrap(), CompletionLimits::default())
}

fn genus2() -> &'static GroupOracle {
    static O: OnceLock<GroupOracle> = OnceLock::new();
    O.get_or_init(|| GroupOracle::from_presentation(&Presentation::parse(GENUS2).unwrap(), CompletionLimits::default()).unwrap())
}

fn z2() -> &'static GroupOracle {
    static O: OnceLock<GroupOracle> = OnceLock::new();
    O.get_or_init(|| GroupOracle::from_presentation(&Presentation::parse(Z2).unwrap(), CompletionLimits::default()).unwrap())
}

fn word(k: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..(2 * k) as u8, 0..=max).prop_map(|v| Word::new(v.into_iter().map(Letter).collect()))
}

#[test]
fn completions_are_confluent() {
    for text in [GENUS2, Z2, "gens: a b"] {
        let rs = system(text);
        assert!(rs.is_confluent());
        assert!(rs.check_confluence());
        for (l, r) in rs.rules() {
            assert!(rs.alphabet().shortlex_compare(r, l).is_lt());
        }
    }
    let free = system("gens: a b");
    assert_eq!(free.rules().len(), 4);
    assert!(free.rules().iter().all(|(l, r)| l.len() == 2 && reduce(l).is_empty() && r.is_empty()));
}

#[test]
fn free_oracle_matches_reduce() {
    let o = GroupOracle::free(2);
    let al = Alphabet::free(2);
    // all words of length ≤ 7 over four letters, not only reduced ones
    for len in 0..=7u32 {
        for code in 0..4usize.pow(len) {
            let w = Word::new((0..len).map(|i| Letter((code / 4usize.pow(i) % 4) as u8)).collect());
            assert_eq!(o.normal_form(&w), reduce(&w));
        }
    }
    let p = |s: &str| al.parse_word(s).unwrap();
    assert!(equal(&o, &p("ab"), &p("ab")));
    assert!(!equal(&o, &p("ab"), &p("ba")));
    assert!(equal(z2(), &p("ab"), &p("ba")));
    assert_eq!(z2().normal_form(&p("ba")), p("ab"));
    assert!(z2().normal_form(&p("abAB")).is_empty());
}

#[test]
fn relators_die_in_genus2() {
    let o = genus2();
    let al = o.alphabet().clone();
    let rel = al.parse_word("abABcdCD").unwrap();
    for i in 0..rel.len() {
        let rot = rel.subword(i, rel.len()).concat(&rel.prefix(i));
        assert!(o.normal_form(&rot).is_empty());
        assert!(o.normal_form(&rot.inverse()).is_empty());
    }
    // normal forms of short words are distinct elements of the free group image
    let count = enumerate_reduced(&al, 3)
        .map(|w| o.normal_form(&w))
        .collect::<std::collections::HashSet<_>>()
        .len();
    assert_eq!(count, 1 + 8 + 56 + 392);
}

proptest! {
    #[test]
    fn genus2_normal_form_is_idempotent(w in word(4, 30)) {
        let o = genus2();
        let nf = o.normal_form(&w);
        prop_assert_eq!(o.normal_form(&nf), nf.clone());
        prop_assert!(nf.len() <= w.len());
    }

    #[test]
    fn genus2_multiply_is_associative(x in word(4, 10), y in word(4, 10), z in word(4, 10)) {
        let o = genus2();
        prop_assert_eq!(o.multiply(&o.multiply(&x, &y), &z), o.multiply(&x, &o.multiply(&y, &z)));
        prop_assert!(o.multiply(&x, &x.inverse()).is_empty());
    }

    #[test]
    fn rules_act_identically_in_context(i in 0usize..64, u in word(4, 6), v in word(4, 6)) {
        let rs = genus2();
        let GroupOracle::Rewriting(sys) = rs else { panic!("genus2 needs rewriting") };
        let (l, r) = &sys.rules()[i % sys.rules().len()];
        let a = u.concat(l).concat(&v);
        let b = u.concat(r).concat(&v);
        prop_assert_eq!(rs.normal_form(&a), rs.normal_form(&b));
    }

    #[test]
    fn z2_normal_form_depends_on_exponent_sums(w in word(2, 24)) {
        let sum = |gen: u8| w.letters().iter().map(|l| match l.0 {
            x if x == 2 * gen => 1i32,
            x if x == 2 * gen + 1 => -1,
            _ => 0,
        }).sum::<i32>();
        let (p, q) = (sum(0), sum(1));
        let nf = z2().normal_form(&w);
        prop_assert_eq!(nf.len() as i32, p.abs() + q.abs());
    }

    #[test]
    fn presentation_text_roundtrips(rels in prop::collection::vec(word(2, 6), 0..3)) {
        let al = Alphabet::free(2);
        let text: String = std::iter::once("gens: a b\n".to_string())
            .chain(rels.iter().map(|r| reduce(r)).filter(|r| !r.is_empty()).map(|r| format!("rel: {}\n", al.format(&r))))
            .collect();
        if let Ok(p) = Presentation::parse(&text) {
            let again = Presentation::parse(&p.to_text()).unwrap();
            prop_assert_eq!(again.to_text(), p.to_text());
        }
    }
}
