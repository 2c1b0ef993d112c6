use alloc::vec::Vec;

use super::dvbs2_table::RATE_1_2_ADDRESSES;

pub(super) const NORMAL_FRAME: usize = 64_800;
const GROUP: usize = 360;

/// Check lists of the rate 1/2 normal-frame code.
///
/// Information bit `j` (group `j / 360`, offset `w = j % 360`) feeds parity
/// accumulators `(x + w·q) mod m` for every address `x` of its group, with
/// `q = m / 360`. The parity part is the staircase `p_i ⊕ p_{i-1}`.
pub(super) fn rate_1_2_checks() -> Vec<Vec<usize>> {
    let m = NORMAL_FRAME / 2;
    let k = NORMAL_FRAME - m;
    let q = m / GROUP;
    let mut checks: Vec<Vec<usize>> = (0..m).map(|_| Vec::with_capacity(7)).collect();
    for j in 0..k {
        let w = j % GROUP;
        for &x in RATE_1_2_ADDRESSES[j / GROUP] {
            checks[(x as usize + w * q) % m].push(j);
        }
    }
    checks[0].push(k);
    for (i, check) in checks.iter_mut().enumerate().skip(1) {
        check.push(k + i - 1);
        check.push(k + i);
    }
    checks
}
