#![no_main]

use libfuzzer_sys::fuzz_target;
use ssiso::quat::parse_rational;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = parse_rational(s) {
        let text = format!("{}/{}", x.numer(), x.denom());
        assert_eq!(parse_rational(&text).unwrap(), x);
    }
});
