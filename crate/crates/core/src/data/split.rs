use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{BinaryDataset, DataError, LabeledDataset};

/// Train/test split. With `stratified`, each class contributes
/// `round(train_fraction · n_class)` members to the training part.
pub fn split(
    data: &LabeledDataset,
    train_fraction: f64,
    stratified: bool,
    seed: u64,
) -> Result<(LabeledDataset, LabeledDataset), DataError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(DataError::InvalidArgument(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    let groups = if stratified {
        let groups = data.class_members();
        if let Some((class, members)) = groups.iter().find(|(_, m)| m.len() < 2) {
            return Err(DataError::ClassTooSmall {
                class: class.clone(),
                count: members.len(),
                required: 2,
            });
        }
        groups.into_iter().map(|(_, m)| m).collect()
    } else {
        vec![(0..data.len()).collect::<Vec<_>>()]
    };
    for mut members in groups {
        members.shuffle(&mut rng);
        let n_train = (train_fraction * members.len() as f64).round() as usize;
        train.extend_from_slice(&members[..n_train]);
        test.extend_from_slice(&members[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((data.subset(&train), data.subset(&test)))
}

/// Validation-fold membership for `k`-fold cross validation. Members are
/// dealt round-robin (class by class when stratified), so fold sizes differ
/// by at most one and each class is spread evenly.
pub fn kfold_indices(
    data: &LabeledDataset,
    k: usize,
    stratified: bool,
    seed: u64,
) -> Result<Vec<Vec<usize>>, DataError> {
    if k < 2 {
        return Err(DataError::InvalidArgument(format!("k must be at least 2, got {k}")));
    }
    if data.len() < k {
        return Err(DataError::InvalidArgument(format!(
            "{} samples cannot fill {k} folds",
            data.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups: Vec<Vec<usize>> = if stratified {
        let groups = data.class_members();
        if let Some((class, members)) = groups.iter().find(|(_, m)| m.len() < k) {
            return Err(DataError::ClassTooSmall {
                class: class.clone(),
                count: members.len(),
                required: k,
            });
        }
        groups.into_iter().map(|(_, m)| m).collect()
    } else {
        vec![(0..data.len()).collect()]
    };
    let mut folds = vec![Vec::new(); k];
    let mut next = 0usize;
    for mut members in groups {
        members.shuffle(&mut rng);
        for i in members {
            folds[next % k].push(i);
            next += 1;
        }
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

/// `k` (train, validation) pairs.
pub fn kfold(
    data: &LabeledDataset,
    k: usize,
    stratified: bool,
    seed: u64,
) -> Result<Vec<(LabeledDataset, LabeledDataset)>, DataError> {
    let folds = kfold_indices(data, k, stratified, seed)?;
    Ok(folds
        .iter()
        .map(|val| {
            let mut in_val = vec![false; data.len()];
            val.iter().for_each(|&i| in_val[i] = true);
            let train: Vec<usize> = (0..data.len()).filter(|&i| !in_val[i]).collect();
            (data.subset(&train), data.subset(val))
        })
        .collect())
}

/// Keeps at most `ceil(ratio · n_minority)` randomly chosen members of the
/// majority class; the minority class is kept whole.
pub fn downsample_majority(data: &BinaryDataset, ratio: f64, seed: u64) -> Result<BinaryDataset, DataError> {
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(DataError::InvalidArgument(format!(
            "downsample ratio must be positive, got {ratio}"
        )));
    }
    let (pos, neg): (Vec<usize>, Vec<usize>) = (0..data.len()).partition(|&i| data.y()[i] > 0.0);
    let (minority, mut majority) = if pos.len() <= neg.len() { (pos, neg) } else { (neg, pos) };
    let keep = ((ratio * minority.len() as f64).ceil() as usize).min(majority.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    majority.shuffle(&mut rng);
    majority.truncate(keep);
    let mut indices = minority;
    indices.extend(majority);
    indices.sort_unstable();
    Ok(data.subset(&indices))
}
