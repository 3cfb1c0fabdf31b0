#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use racg::CoxeterGroup;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// All words of length at most `max_len` over `rank` letters, shortest first.
pub fn all_words(rank: usize, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..rank as u8 {
                let mut v: Vec<u8> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Classes of words of length `≤ max_len` under the defining relations only:
/// deleting a factor `s s` and swapping adjacent commuting letters. Neither
/// move lengthens a word, so the classes are exactly the group elements.
pub fn relation_classes(group: &CoxeterGroup, max_len: usize) -> (Vec<Vec<u8>>, Vec<usize>) {
    let graph = group.graph();
    let words = all_words(graph.len(), max_len);
    let index: HashMap<&[u8], usize> = words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let mut parent: Vec<usize> = (0..words.len()).collect();
    for (i, w) in words.iter().enumerate() {
        for j in 0..w.len().saturating_sub(1) {
            let (a, b) = (w[j], w[j + 1]);
            let mut next = w.clone();
            if a == b {
                next.drain(j..j + 2);
            } else if graph.is_adjacent(a as usize, b as usize) {
                next.swap(j, j + 1);
            } else {
                continue;
            }
            let k = index[next.as_slice()];
            let (ri, rk) = (find(&mut parent, i), find(&mut parent, k));
            parent[ri] = rk;
        }
    }
    let roots = (0..words.len()).map(|i| find(&mut parent, i)).collect();
    (words, roots)
}
