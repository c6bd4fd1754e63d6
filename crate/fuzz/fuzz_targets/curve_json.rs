#![no_main]

use libfuzzer_sys::fuzz_target;
use ssiso::curve::Curve;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(e) = Curve::from_json_str(s) {
        let text = serde_json::to_string(&e.to_json()).unwrap();
        assert_eq!(Curve::from_json_str(&text).unwrap(), e);
    }
});
