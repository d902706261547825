use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::HarnessError;

/// Train and test indices of one fold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified k-fold split.
///
/// Members of each class are shuffled with the seed, the per-class lists are
/// concatenated in class order, and position `p` of that sequence goes to
/// fold `p mod k`. Every fold then holds each class within one graph of its
/// global share.
pub fn stratified_kfold(labels: &[usize], k: usize, seed: u64) -> Result<Vec<Fold>, HarnessError> {
    if k < 2 {
        return Err(HarnessError::BadK(k));
    }
    let num_classes = labels.iter().max().map_or(0, |&m| m + 1);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); num_classes];
    for (i, &c) in labels.iter().enumerate() {
        by_class[c].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tests: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut position = 0;
    for (class, members) in by_class.iter_mut().enumerate() {
        if members.is_empty() {
            continue;
        }
        if members.len() < k {
            return Err(HarnessError::ClassTooSmall { class, count: members.len(), k });
        }
        members.shuffle(&mut rng);
        for &m in members.iter() {
            tests[position % k].push(m);
            position += 1;
        }
    }
    Ok(tests
        .into_iter()
        .map(|mut test| {
            test.sort_unstable();
            let mut in_test = vec![false; labels.len()];
            for &t in &test {
                in_test[t] = true;
            }
            let train = (0..labels.len()).filter(|&i| !in_test[i]).collect();
            Fold { train, test }
        })
        .collect())
}
