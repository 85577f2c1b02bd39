//! Finite multisets as sorted vectors, plus the combinatorics the
//! exponential constructions need.

use super::Value;

/// Multiset sum of two sorted bags.
pub fn sum(a: &[Value], b: &[Value]) -> Vec<Value> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i].clone());
            i += 1;
        } else {
            out.push(b[j].clone());
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Removes one occurrence of `item`, if present.
pub fn remove_one(bag: &[Value], item: &Value) -> Option<Vec<Value>> {
    let i = bag.binary_search(item).ok()?;
    let mut out = bag.to_vec();
    out.remove(i);
    Some(out)
}

/// `sub ⊆ bag` as multisets.
pub fn is_sub(sub: &[Value], bag: &[Value]) -> bool {
    let mut j = 0;
    for x in sub {
        while j < bag.len() && bag[j] < *x {
            j += 1;
        }
        if j == bag.len() || bag[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// `bag - sub`, assuming `sub ⊆ bag`.
pub fn difference(bag: &[Value], sub: &[Value]) -> Vec<Value> {
    let mut out = Vec::with_capacity(bag.len());
    let mut j = 0;
    for x in bag {
        if j < sub.len() && sub[j] == *x {
            j += 1;
        } else {
            out.push(x.clone());
        }
    }
    out
}

/// Groups a sorted bag into (element, multiplicity).
fn runs(bag: &[Value]) -> Vec<(&Value, usize)> {
    let mut out: Vec<(&Value, usize)> = Vec::new();
    for x in bag {
        match out.last_mut() {
            Some((y, n)) if *y == x => *n += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

/// All sub-multisets of a sorted bag, each sorted, without repetition.
pub fn sub_bags(bag: &[Value]) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    for (x, n) in runs(bag) {
        let mut next = Vec::with_capacity(out.len() * (n + 1));
        for prefix in &out {
            for k in 0..=n {
                let mut v = prefix.clone();
                v.extend(std::iter::repeat_n(x.clone(), k));
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// All `(μ, ν)` with `μ + ν = bag`.
pub fn splits(bag: &[Value]) -> Vec<(Vec<Value>, Vec<Value>)> {
    sub_bags(bag)
        .into_iter()
        .map(|left| {
            let right = difference(bag, &left);
            (left, right)
        })
        .collect()
}

/// All multisets of size at most `max` over a sorted, deduplicated alphabet.
pub fn bags_up_to(alphabet: &[Value], max: usize) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<(Vec<Value>, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..max {
        let mut next = Vec::new();
        for (bag, from) in &layer {
            for (i, x) in alphabet.iter().enumerate().skip(*from) {
                let mut b = bag.clone();
                b.push(x.clone());
                next.push((b, i));
            }
        }
        out.extend(next.iter().map(|(b, _)| b.clone()));
        layer = next;
    }
    out
}

/// All distinct orderings of a sorted bag, in lexicographic order.
pub fn distinct_permutations(bag: &[Value]) -> Vec<Vec<Value>> {
    let mut current = bag.to_vec();
    let mut out = vec![current.clone()];
    while next_permutation(&mut current) {
        out.push(current.clone());
    }
    out
}

fn next_permutation(v: &mut [Value]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All bags of bags `[μ₁, …, μ_k]` with `μ₁ + … + μ_k = bag` and `k ≤ max_parts`.
/// Parts may be empty, so the result is only finite because of the bound.
pub fn decompositions(bag: &[Value], max_parts: usize) -> Vec<Vec<Value>> {
    let mut out = std::collections::BTreeSet::new();
    let mut parts = Vec::new();
    decompose(bag, max_parts, &mut parts, &mut out);
    out.into_iter().collect()
}

fn decompose(
    rest: &[Value],
    slots: usize,
    parts: &mut Vec<Value>,
    out: &mut std::collections::BTreeSet<Vec<Value>>,
) {
    if rest.is_empty() {
        // pad with any number of empty parts
        let mut with_empties = parts.clone();
        loop {
            let mut sorted = with_empties.clone();
            sorted.sort();
            out.insert(sorted);
            if with_empties.len() >= parts.len() + slots {
                break;
            }
            with_empties.push(Value::Bag(Vec::new()));
        }
        return;
    }
    if slots == 0 {
        return;
    }
    // the part containing the first remaining element
    let first = &rest[0];
    let tail = &rest[1..];
    for extra in sub_bags(tail) {
        let mut part = vec![first.clone()];
        part.extend(extra.iter().cloned());
        part.sort();
        let remaining = difference(tail, &extra);
        parts.push(Value::Bag(part));
        decompose(&remaining, slots - 1, parts, out);
        parts.pop();
    }
}

/// Cartesian product of option lists; the empty product is one empty tuple.
pub fn product<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for o in opts {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Value {
        Value::atom(s)
    }

    #[test]
    fn permutations_of_repeated_elements_are_distinct_lists() {
        assert_eq!(distinct_permutations(&[a("s"), a("s")]).len(), 1);
        assert_eq!(distinct_permutations(&[a("s"), a("t")]).len(), 2);
        assert_eq!(distinct_permutations(&[a("s"), a("s"), a("t")]).len(), 3);
        assert_eq!(distinct_permutations(&[]).len(), 1);
    }

    #[test]
    fn splits_cover_sub_bags() {
        let bag = vec![a("s"), a("s"), a("t")];
        let sp = splits(&bag);
        assert_eq!(sp.len(), 6);
        for (l, r) in sp {
            assert_eq!(sum(&l, &r), bag);
        }
    }

    #[test]
    fn bags_up_to_counts() {
        // multisets of size <= 2 over 2 letters: 1 + 2 + 3
        assert_eq!(bags_up_to(&[a("p"), a("q")], 2).len(), 6);
        assert_eq!(bags_up_to(&[], 3).len(), 1);
    }

    #[test]
    fn decompositions_include_empty_parts() {
        let d = decompositions(&[], 2);
        assert_eq!(d.len(), 3); // [], [[]], [[],[]]
        let d = decompositions(&[a("s"), a("t")], 2);
        // [[s,t]], [[s],[t]], [[s,t],[]]
        assert_eq!(d.len(), 3);
    }

    #[test]
    fn empty_product_is_singleton() {
        let p: Vec<Vec<u8>> = product(&[]);
        assert_eq!(p, vec![Vec::<u8>::new()]);
        assert!(product(&[vec![1u8], vec![]]).is_empty());
    }

    #[test]
    fn sub_and_difference() {
        let bag = vec![a("p"), a("p"), a("q")];
        assert!(is_sub(&[a("p"), a("q")], &bag));
        assert!(!is_sub(&[a("q"), a("q")], &bag));
        assert_eq!(difference(&bag, &[a("p")]), vec![a("p"), a("q")]);
        assert_eq!(remove_one(&bag, &a("q")).unwrap(), vec![a("p"), a("p")]);
    }
}
