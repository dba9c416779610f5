fn main() {
    std::process::exit(tokenfst::cli::main_with(std::env::args_os()));
}
