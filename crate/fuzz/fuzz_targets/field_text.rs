#![no_main]

use libfuzzer_sys::fuzz_target;
use ssiso::ff::{FieldCtx, FieldElem};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for ctx in [FieldCtx::fp2(101).unwrap(), FieldCtx::ext(7, 3).unwrap()] {
        if let Ok(x) = FieldElem::parse(&ctx, s) {
            assert_eq!(FieldElem::parse(&ctx, &x.to_string()).unwrap(), x);
        }
    }
});
