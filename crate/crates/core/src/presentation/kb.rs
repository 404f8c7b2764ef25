use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

use super::Presentation;

#[derive(Clone, Copy, Debug)]
pub struct CompletionLimits {
    pub max_rules: usize,
    pub max_rule_len: usize,
}

impl Default for CompletionLimits {
    fn default() -> Self {
        CompletionLimits {
            max_rules: 2000,
            max_rule_len: 40,
        }
    }
}

/// String rewriting system oriented by the shortlex order of its alphabet.
#[derive(Clone, Debug)]
pub struct RewritingSystem {
    alphabet: Alphabet,
    rules: Vec<(Word, Word)>,
    confluent: bool,
    // Rule indices grouped by the last letter of their left side.
    by_last: Vec<Vec<usize>>,
}

impl RewritingSystem {
    fn from_rules(alphabet: Alphabet, rules: Vec<(Word, Word)>, confluent: bool) -> Self {
        let mut by_last = vec![Vec::new(); alphabet.size()];
        for (i, (l, _)) in rules.iter().enumerate() {
            by_last[l.letters().last().expect("non-empty lhs").index()].push(i);
        }
        RewritingSystem {
            alphabet,
            rules,
            confluent,
            by_last,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[(Word, Word)] {
        &self.rules
    }

    pub fn is_confluent(&self) -> bool {
        self.confluent
    }

    /// Rewrites to a fixed point whether or not the system is confluent.
    pub fn rewrite(&self, w: &Word) -> Word {
        rewrite_with(&self.rules, &self.by_last, w.letters())
    }

    /// Every overlap and inclusion of left sides resolves to a common form.
    pub fn check_confluence(&self) -> bool {
        let n = self.rules.len();
        for i in 0..n {
            for j in 0..n {
                for (x, y) in critical_pairs(&self.rules[i], &self.rules[j], i == j) {
                    if self.rewrite(&x) != self.rewrite(&y) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn rewrite_with(rules: &[(Word, Word)], by_last: &[Vec<usize>], input: &[Letter]) -> Word {
    // The stack never contains a left side; pending letters are consumed from
    // the back of `todo`.
    let mut stack: Vec<Letter> = Vec::with_capacity(input.len());
    let mut todo: Vec<Letter> = input.iter().rev().copied().collect();
    while let Some(l) = todo.pop() {
        stack.push(l);
        for &ri in &by_last[l.index()] {
            let (lhs, rhs) = &rules[ri];
            let k = lhs.len();
            if k <= stack.len() && &stack[stack.len() - k..] == lhs.letters() {
                stack.truncate(stack.len() - k);
                todo.extend(rhs.letters().iter().rev());
                break;
            }
        }
    }
    Word::new(stack)
}

fn orient(alphabet: &Alphabet, a: Word, b: Word) -> (Word, Word) {
    match alphabet.shortlex_compare(&a, &b) {
        Ordering::Less => (b, a),
        _ => (a, b),
    }
}

/// Pairs of one-step reducts of the words where the left sides of `r1` and
/// `r2` overlap or one contains the other.
fn critical_pairs(r1: &(Word, Word), r2: &(Word, Word), same: bool) -> Vec<(Word, Word)> {
    let (l1, x1) = (r1.0.letters(), &r1.1);
    let (l2, x2) = (r2.0.letters(), &r2.1);
    let mut out = Vec::new();
    // proper overlaps: suffix of l1 == prefix of l2
    for k in 1..l1.len().min(l2.len()) {
        if l1[l1.len() - k..] == l2[..k] {
            let mut a = x1.letters().to_vec();
            a.extend_from_slice(&l2[k..]);
            let mut b = l1[..l1.len() - k].to_vec();
            b.extend_from_slice(x2.letters());
            out.push((Word::new(a), Word::new(b)));
        }
    }
    // l2 inside l1
    if !same && l2.len() <= l1.len() {
        for p in 0..=l1.len() - l2.len() {
            if l1[p..p + l2.len()] == *l2 {
                let mut b = l1[..p].to_vec();
                b.extend_from_slice(x2.letters());
                b.extend_from_slice(&l1[p + l2.len()..]);
                out.push((x1.clone(), Word::new(b)));
            }
        }
    }
    out
}

struct Completion {
    alphabet: Alphabet,
    rules: Vec<Option<(Word, Word)>>,
    by_last: Vec<Vec<usize>>,
    queue: BinaryHeap<Reverse<(usize, u64, Vec<u8>, Vec<u8>)>>,
    seq: u64,
}

impl Completion {
    fn push(&mut self, a: Word, b: Word) {
        let key = a.len().max(b.len());
        let enc = |w: Word| w.into_letters().into_iter().map(|l| l.0).collect::<Vec<u8>>();
        self.seq += 1;
        self.queue.push(Reverse((key, self.seq, enc(a), enc(b))));
    }

    fn pop(&mut self) -> Option<(Word, Word)> {
        self.queue.pop().map(|Reverse((_, _, a, b))| {
            let dec = |v: Vec<u8>| Word::new(v.into_iter().map(Letter).collect());
            (dec(a), dec(b))
        })
    }

    fn live(&self) -> Vec<(Word, Word)> {
        self.rules.iter().flatten().cloned().collect()
    }

    fn rebuild_index(&mut self) {
        self.by_last = vec![Vec::new(); self.alphabet.size()];
        for (i, r) in self.rules.iter().enumerate() {
            if let Some((l, _)) = r {
                self.by_last[l.letters().last().unwrap().index()].push(i);
            }
        }
    }

    fn nf(&self, w: &Word) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(w.len());
        let mut todo: Vec<Letter> = w.letters().iter().rev().copied().collect();
        while let Some(l) = todo.pop() {
            stack.push(l);
            for &ri in &self.by_last[l.index()] {
                let (lhs, rhs) = self.rules[ri].as_ref().unwrap();
                let k = lhs.len();
                if k <= stack.len() && &stack[stack.len() - k..] == lhs.letters() {
                    stack.truncate(stack.len() - k);
                    todo.extend(rhs.letters().iter().rev());
                    break;
                }
            }
        }
        Word::new(stack)
    }

    fn live_count(&self) -> usize {
        self.rules.iter().flatten().count()
    }
}

fn contains(hay: &[Letter], needle: &[Letter]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Bounded shortlex Knuth–Bendix completion.
///
/// Equations whose oriented left side exceeds `max_rule_len` are set aside;
/// the result is flagged confluent only when none remain unresolved and an
/// independent critical-pair check passes.
pub fn kb_complete(p: &Presentation, limits: CompletionLimits) -> RewritingSystem {
    let alphabet = p.alphabet.clone();
    let mut c = Completion {
        alphabet: alphabet.clone(),
        rules: Vec::new(),
        by_last: vec![Vec::new(); alphabet.size()],
        queue: BinaryHeap::new(),
        seq: 0,
    };
    for &x in alphabet.letters() {
        c.push(Word::new(vec![x, x.inverse()]), Word::identity());
    }
    for r in &p.relators {
        for rel in [r.clone(), r.inverse()] {
            let n = rel.len();
            for shift in 0..n {
                let mut rot = rel.letters()[shift..].to_vec();
                rot.extend_from_slice(&rel.letters()[..shift]);
                let rot = Word::new(rot);
                let half = n.div_ceil(2);
                c.push(rot.prefix(half), rot.subword(half, n).inverse());
            }
        }
    }

    let mut deferred: Vec<(Word, Word)> = Vec::new();
    let mut exhausted = false;
    while let Some((a, b)) = c.pop() {
        let a = c.nf(&a);
        let b = c.nf(&b);
        if a == b {
            continue;
        }
        let (lhs, rhs) = orient(&alphabet, a, b);
        if lhs.len() > limits.max_rule_len {
            deferred.push((lhs, rhs));
            continue;
        }
        // Interreduce: rules whose left side contains the new one go back to the queue.
        let mut displaced = Vec::new();
        for slot in c.rules.iter_mut() {
            if matches!(slot, Some((l, _)) if contains(l.letters(), lhs.letters())) {
                displaced.push(slot.take().unwrap());
            }
        }
        for (l, r) in displaced {
            c.push(l, r);
        }
        let idx = c.rules.len();
        c.rules.push(Some((lhs.clone(), rhs.clone())));
        c.rebuild_index();
        // Right sides may have become reducible.
        for i in 0..c.rules.len() {
            if let Some((l, r)) = c.rules[i].clone() {
                let nr = c.nf(&r);
                if nr != r {
                    c.rules[i] = Some((l, nr));
                }
            }
        }
        let new_rule = c.rules[idx].clone().unwrap();
        for other in c.live() {
            let same = other == new_rule;
            for (x, y) in critical_pairs(&new_rule, &other, same) {
                c.push(x, y);
            }
            if !same {
                for (x, y) in critical_pairs(&other, &new_rule, false) {
                    c.push(x, y);
                }
            }
        }
        if c.live_count() > limits.max_rules {
            exhausted = true;
            break;
        }
    }

    let rules = c.live();
    let mut unresolved = exhausted;
    if !unresolved {
        for (a, b) in &deferred {
            if c.nf(a) != c.nf(b) {
                unresolved = true;
                break;
            }
        }
    }
    let mut system = RewritingSystem::from_rules(alphabet, rules, false);
    system.confluent = !unresolved && system.check_confluence();
    system
}

/// Normal form, refused for systems that are not confluent.
pub fn normal_form(rs: &RewritingSystem, w: &Word) -> Result<Word> {
    if !rs.confluent {
        return Err(Error::NotConfluent);
    }
    Ok(rs.rewrite(w))
}
