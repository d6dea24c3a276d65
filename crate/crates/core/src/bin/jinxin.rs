fn main() {
    std::process::exit(jinxin::cli::main_with_args(std::env::args_os()));
}
