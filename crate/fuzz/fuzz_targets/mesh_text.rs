#![no_main]
use cavitylab::geometry::io::read_mesh_text;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = read_mesh_text(text) {
        for e in &m.elements {
            assert!(e[0] < m.nodes.len() && e[1] < m.nodes.len());
        }
    }
});
