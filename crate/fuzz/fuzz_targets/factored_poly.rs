#![no_main]

use libfuzzer_sys::fuzz_target;
use ssiso::ssgraph::parse_factored;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for p in [2, 37, 101] {
        if let Ok(f) = parse_factored(p, s) {
            assert!(f.iter().flatten().all(|&c| c < p));
        }
    }
});
