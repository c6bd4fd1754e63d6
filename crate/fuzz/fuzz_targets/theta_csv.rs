#![no_main]

use libfuzzer_sys::fuzz_target;
use ssiso::quat::ThetaSeries;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = ThetaSeries::from_csv(s) {
        assert_eq!(ThetaSeries::from_csv(&t.to_csv()).unwrap(), t);
    }
});
