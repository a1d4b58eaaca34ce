use super::{Direction, ExtMemKind, PlatformConfig};

/// Time and memory-side energy of one transfer. Reads and writes share the
/// interface bandwidth and active current.
pub fn ext_transfer(platform: &PlatformConfig, kind: ExtMemKind, nbytes: u64, _dir: Direction) -> (f64, f64) {
    let m = platform.mem(kind);
    let seconds = nbytes as f64 / m.bandwidth_bytes_s;
    (seconds, m.active_mw() * 1e-3 * seconds)
}
