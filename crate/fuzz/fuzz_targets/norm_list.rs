#![no_main]

use libfuzzer_sys::fuzz_target;
use ssiso::latgen::parse_norms;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_norms(s) {
        let text: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(parse_norms(&text.join(",")).unwrap(), v);
    }
});
