//! Worst-case fault families that push the fault diameter to n + 1.

use super::{FaultFamily, FaultMode};
use crate::cube::{coord_bit, Subcube, MAX_DIM};
use crate::error::{arg_err, Result};

/// The `n - 2` edges `{(x)^i, (z)^i}` for `2 <= i <= n - 1`, where
/// `x = 00…0` and `z = (x)^1`.
///
/// Inside the half with `x_n = 0` these edges cut `{x, z}` off from the rest,
/// so every path from `x` to `11…10` has to leave through coordinate `n`
/// and ends up with length at least `n + 1`.
pub fn adversarial_q1_family(n: u8) -> Result<FaultFamily> {
    if !(4..=MAX_DIM).contains(&n) {
        return Err(arg_err!("adversarial Q_1 family needs 4 <= n <= {MAX_DIM}, got {n}"));
    }
    let elements = (2..n)
        .map(|i| Subcube::from_raw(coord_bit(n, 1), coord_bit(n, i), n))
        .collect();
    Ok(FaultFamily::new(n, FaultMode::Structure(1), elements))
}

/// The `n - m - 1` copies of Q_m that surround the base copy holding `00…0`
/// inside the half `x_n = 0`.
///
/// That half is split as `Q_m □ Q_{n-m-1}`, with the Q_m factor on
/// coordinates `1..=m` and the second factor on coordinates `m+1..=n-1`.
/// The base copy sits at `t = 00…0`; element `i` is the copy at `t` flipped
/// in coordinate `m + i`.
pub fn adversarial_subcube_family(n: u8, m: u8) -> Result<FaultFamily> {
    if n > MAX_DIM || (n as u16) < m as u16 + 3 {
        return Err(arg_err!("adversarial subcube family needs m + 3 <= n <= {MAX_DIM}, got n={n}, m={m}"));
    }
    let free = (1..=m).fold(0u32, |acc, i| acc | coord_bit(n, i));
    let elements = (1..n - m)
        .map(|i| Subcube::from_raw(free, coord_bit(n, m + i), n))
        .collect();
    Ok(FaultFamily::new(n, FaultMode::Structure(m), elements))
}
