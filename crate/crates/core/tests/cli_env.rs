// Separate test binary: it sets a process-wide environment variable.

use bidisc::cli::run_command;
use bidisc::io::CONFIG_ENV;

#[test]
fn config_path_from_environment() {
    let dir = std::env::temp_dir().join(format!("bidisc-cli-env-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"seed": 4242}"#).unwrap();
    std::env::set_var(CONFIG_ENV, &cfg);

    let out = run_command(["bidisc", "suite", "--only", "1"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.starts_with("suite seed=4242 "));

    // an explicit flag wins over the environment
    let other = dir.join("other.json");
    std::fs::write(&other, r#"{"seed": 7}"#).unwrap();
    let out = run_command(["bidisc", "suite", "--only", "1", "--config", other.to_str().unwrap()]);
    assert!(out.stdout.starts_with("suite seed=7 "));

    std::env::set_var(CONFIG_ENV, dir.join("missing.json"));
    let out = run_command(["bidisc", "point", "--s", "0", "--p", "0"]);
    assert_eq!(out.code, 1);
    std::env::remove_var(CONFIG_ENV);
}
