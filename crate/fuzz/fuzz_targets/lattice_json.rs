#![no_main]

use libfuzzer_sys::fuzz_target;
use ssiso::quat::QuatLattice;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(l) = QuatLattice::from_json_str(s) {
        let text = serde_json::to_string(&l.to_json()).unwrap();
        assert_eq!(QuatLattice::from_json_str(&text).unwrap(), l);
    }
});
