//! Shared fixtures: scripted git repositories with fixed dates and authors.

#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

use tempfile::TempDir;

pub const DAY: i64 = 86_400;
pub const EPOCH: i64 = 1_600_000_000;

pub struct FixtureRepo {
    dir: TempDir,
    clock: i64,
}

impl FixtureRepo {
    pub fn new() -> Self {
        let repo = Self {
            dir: TempDir::new().expect("tempdir"),
            clock: EPOCH,
        };
        repo.git(&["init", "-q", "-b", "main"], "nobody@example.org");
        repo
    }

    pub fn path(&self) -> &Path {
        self.dir.path()
    }

    pub fn git(&self, args: &[&str], email: &str) -> String {
        let date = format!("@{} +0000", self.clock);
        let out = Command::new("git")
            .arg("-C")
            .arg(self.path())
            .args(args)
            .env("GIT_CONFIG_GLOBAL", "/dev/null")
            .env("GIT_CONFIG_NOSYSTEM", "1")
            .env("GIT_AUTHOR_NAME", email.split('@').next().unwrap())
            .env("GIT_AUTHOR_EMAIL", email)
            .env("GIT_COMMITTER_NAME", "fixture")
            .env("GIT_COMMITTER_EMAIL", "fixture@example.org")
            .env("GIT_AUTHOR_DATE", &date)
            .env("GIT_COMMITTER_DATE", &date)
            .output()
            .expect("git runs");
        assert!(
            out.status.success(),
            "git {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8(out.stdout).unwrap()
    }

    pub fn write(&self, rel: &str, lines: &[&str]) {
        let path = self.path().join(rel);
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        let mut text = lines.join("\n");
        text.push('\n');
        std::fs::write(path, text).unwrap();
    }

    pub fn remove(&self, rel: &str) {
        std::fs::remove_file(self.path().join(rel)).unwrap();
    }

    /// Commit everything one day after the previous commit; returns the hash.
    pub fn commit(&mut self, message: &str, email: &str) -> String {
        self.clock += DAY;
        self.git(&["add", "-A"], email);
        self.git(&["commit", "-q", "--allow-empty", "-m", message], email);
        self.git(&["rev-parse", "HEAD"], email).trim().to_string()
    }

    pub fn tag(&self, name: &str) {
        self.git(&["tag", name], "nobody@example.org");
    }
}

pub fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

/// Three commits: the third fixes a line introduced by the first.
pub fn three_commit_repo() -> (FixtureRepo, Vec<String>) {
    let mut r = FixtureRepo::new();
    let a = numbered("alpha ", 5);
    r.write("src/main.c", &refs(&a));
    let c1 = r.commit("add main", "ann@example.org");
    r.write("docs/notes.md", &["notes"]);
    let c2 = r.commit("write notes", "bob@example.org");
    let mut a2 = a.clone();
    a2[2] = "alpha 3 corrected".into();
    r.write("src/main.c", &refs(&a2));
    let c3 = r.commit("fix crash in parser", "bob@example.org");
    (r, vec![c1, c2, c3])
}

/// Twelve commits over three tags. Commits 4, 5 and 6 (1-based) introduce
/// lines that later fix commits change or delete; commit 12 is a fix that
/// only adds lines, so it traces to nothing.
pub fn twelve_commit_repo() -> (FixtureRepo, Vec<String>, [usize; 3]) {
    let mut r = FixtureRepo::new();
    let mut hashes = Vec::new();
    let mut a = numbered("parse ", 10);
    let mut b = numbered("lex ", 10);
    let mut c = numbered("cache ", 8);

    r.write("src/parser.c", &refs(&a));
    hashes.push(r.commit("initial parser", "ann@example.org"));
    r.write("src/lexer.c", &refs(&b));
    hashes.push(r.commit("add lexer", "bob@example.org"));
    r.write("docs/README.md", &["# readme"]);
    hashes.push(r.commit("docs", "cy@example.org"));

    a[2] = "parse 3 reworked".into();
    r.write("src/parser.c", &refs(&a));
    hashes.push(r.commit("refactor parser", "ann@example.org"));
    r.tag("v1");

    r.write("lib/cache.c", &refs(&c));
    hashes.push(r.commit("add cache", "bob@example.org"));
    b.extend(["lex 11".to_string(), "lex 12".to_string()]);
    r.write("src/lexer.c", &refs(&b));
    hashes.push(r.commit("extend lexer", "cy@example.org"));
    r.write("docs/README.md", &["# readme", "more words"]);
    hashes.push(r.commit("update docs", "cy@example.org"));

    a[2] = "parse 3 repaired".into();
    r.write("src/parser.c", &refs(&a));
    hashes.push(r.commit("fix crash in parser", "bob@example.org"));
    r.tag("v2");

    r.write("tests/t.c", &["test 1", "test 2"]);
    hashes.push(r.commit("add tests", "ann@example.org"));
    c[4] = "cache 5 evicts correctly".into();
    r.write("lib/cache.c", &refs(&c));
    hashes.push(r.commit("Fixes cache eviction", "ann@example.org"));
    b.remove(10);
    r.write("src/lexer.c", &refs(&b));
    hashes.push(r.commit("lexer: patch overflow", "bob@example.org"));
    let mut t = vec!["test 1", "test 2"];
    t.push("test 3");
    r.write("tests/t.c", &t);
    hashes.push(r.commit("fix missing test", "cy@example.org"));
    r.tag("v3");

    (r, hashes, [3, 4, 5])
}
