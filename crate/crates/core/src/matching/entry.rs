use serde::Serialize;

use crate::cf::{rcf_expand, RcfWord};
use crate::error::{Error, Result};
use crate::maps::{self, Alpha};
use crate::numerics::ExactReal;

/// First indices `m`, `k` at which the orbits of `alpha` and `1 - alpha`
/// leave the flip region `D_alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EntryTimes {
    pub m: Option<usize>,
    pub k: Option<usize>,
}

/// Entry times into the complement of `D_alpha` for `alpha > 1/2`, found by
/// direct iteration over at most `max_steps` points per orbit.
pub fn entry_times(alpha: &Alpha, max_steps: usize) -> Result<EntryTimes> {
    if !alpha.value().cmp(&ExactReal::frac(1, 2))?.is_gt() {
        return Err(Error::domain("entry times need alpha > 1/2"));
    }
    let first_exit = |x: &ExactReal| -> Result<Option<usize>> {
        let mut cur = x.clone();
        for j in 0..max_steps {
            if cur.is_exact_one() {
                return Ok(None);
            }
            if !maps::in_flip_region(&cur, alpha).map_err(|e| e.at_step(j))? {
                return Ok(Some(j));
            }
            cur = maps::step_unchecked(&cur, alpha).map_err(|e| e.at_step(j))?.1;
        }
        Ok(None)
    };
    Ok(EntryTimes { m: first_exit(alpha.value())?, k: first_exit(alpha.one_minus())? })
}

/// The arithmetic sets allowed for entry times when
/// `alpha = [1, a_1, a_2, ...]`: `m` in `{a_1 + a_3 + ... + a_{2j+1} - 1}`
/// and `k` in `{a_2 + a_4 + ... + a_{2j} - 1 : j >= 1}`, listed up to `bound`.
pub fn entry_time_sets(alpha_word: &RcfWord, bound: u64) -> Result<(Vec<u64>, Vec<u64>)> {
    if alpha_word.get(1) != Some(1) {
        return Err(Error::domain("entry time sets need alpha > 1/2"));
    }
    let mut ms = Vec::new();
    let mut ks = Vec::new();
    let (mut odd, mut even) = (0u64, 0u64);
    let mut i = 1usize;
    while let Some(a) = alpha_word.digit_or_missing(i + 1)? {
        if i % 2 == 1 {
            odd += a;
            if odd - 1 <= bound {
                ms.push(odd - 1);
            }
        } else {
            even += a;
            if even - 1 <= bound {
                ks.push(even - 1);
            }
        }
        if odd > bound + 1 && even > bound + 1 {
            break;
        }
        i += 1;
    }
    Ok((ms, ks))
}

/// Checks found entry times against [`entry_time_sets`]. Finite words are
/// checked in both of their forms; a value passes if either form allows it.
pub fn check_entry_times(alpha: &Alpha, times: &EntryTimes) -> Result<()> {
    let bound = times.m.max(times.k).unwrap_or(0) as u64;
    let word = rcf_expand(alpha.value(), 2 * bound as usize + 4)?;
    let mut forms = vec![word.canonical()];
    if word.is_finite() && word.canonical().len() > Some(1) {
        forms.push(word.long_form()?);
    }
    let mut ok_m = times.m.is_none();
    let mut ok_k = times.k.is_none();
    for w in &forms {
        let (ms, ks) = match entry_time_sets(w, bound) {
            Ok(s) => s,
            Err(Error::InsufficientDigits { .. }) => continue,
            Err(e) => return Err(e),
        };
        ok_m |= times.m.is_some_and(|m| ms.contains(&(m as u64)));
        ok_k |= times.k.is_some_and(|k| ks.contains(&(k as u64)));
    }
    if !ok_m {
        return Err(Error::LemmaViolation(format!("m = {:?} for alpha = {alpha}", times.m)));
    }
    if !ok_k {
        return Err(Error::LemmaViolation(format!("k = {:?} for alpha = {alpha}", times.k)));
    }
    Ok(())
}
