#![no_main]

use libfuzzer_sys::fuzz_target;
use ssiso::ssgraph::SsGraph;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = SsGraph::from_json_str(s) {
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(SsGraph::from_json_str(&text).unwrap(), g);
        let _ = g.validate();
    }
});
