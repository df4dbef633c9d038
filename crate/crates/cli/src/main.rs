use anyhow::Result;
use clap::Parser;
use dgame_cli::{execute, play_session, Cli, Command, GameHandle, EXIT_INPUT};
use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Play {
            game,
            human,
            engine,
            radius,
            max_plies,
        } => {
            let handle = GameHandle::load(&game.sft)?;
            let word = dgame_core::words::TurnWord::from_str(&game.turns)
                .map_err(|e| anyhow::anyhow!("turn word: {e}"))?;
            let variant = match game.variant.as_str() {
                "pass" => dgame_core::Variant::PassAllowed,
                "no-pass" | "nopass" => dgame_core::Variant::NoPass,
                other => anyhow::bail!("unknown variant {other:?}"),
            };
            let player = match human.as_str() {
                "A" | "a" => dgame_core::Player::A,
                "B" | "b" => dgame_core::Player::B,
                other => anyhow::bail!("unknown player {other:?}"),
            };
            let stdin = std::io::stdin();
            let stdout = std::io::stdout();
            play_session(
                &handle,
                &engine,
                player,
                &word,
                variant,
                radius,
                max_plies,
                stdin.lock(),
                stdout.lock(),
            )?;
            Ok(0)
        }
        other => {
            let mut stdout = std::io::stdout();
            let code = execute(other, &mut stdout)?;
            stdout.flush()?;
            Ok(code)
        }
    }
}
