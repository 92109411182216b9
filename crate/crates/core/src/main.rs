fn main() {
    std::process::exit(meta_smgo::cli::main_with_args(std::env::args_os()));
}
