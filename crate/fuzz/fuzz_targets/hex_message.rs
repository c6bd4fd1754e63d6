#![no_main]

use libfuzzer_sys::fuzz_target;
use ssiso::proto::hex_to_bits;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(bits) = hex_to_bits(s) {
        assert_eq!(bits.len() % 8, 0);
    }
});
