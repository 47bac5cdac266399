fn main() {
    std::process::exit(cm_lab::cli::run(std::env::args_os()));
}
