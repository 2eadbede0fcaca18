//! Writes the built-in fixtures as presentation files into a directory.

use std::path::PathBuf;

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    std::fs::create_dir_all(&dir).expect("create output directory");
    for (name, p) in nilpc_core::fixtures::all() {
        let path = dir.join(format!("{}.json", name.to_lowercase()));
        std::fs::write(&path, nilpc::format::emit_presentation(name, &p)).expect("write fixture");
        println!("{}", path.display());
    }
}
