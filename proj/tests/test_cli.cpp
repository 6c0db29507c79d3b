#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(PCC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli exit codes") {
  const fs::path root = fs::temp_directory_path() / "pcc_cli_test";
  fs::remove_all(root);
  fs::create_directories(root / "bad");

  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("exp1 --no-such-flag") == 1);
  CHECK(run("--set nonsense=1 ingest") == 1);

  {
    std::ofstream(root / "bad" / "transcripts.tsv") << "case_id\tline_no\tspeaker\ttext\nc1\t1\tX\thello\n";
    std::ofstream(root / "bad" / "annotations.tsv") << "case_id\tline_no\tcoder_id\tcode\n";
  }
  CHECK(run("--data " + (root / "bad").string() + " ingest") == 2);
  CHECK(run("--data " + (root / "missing").string() + " ingest") == 2);

  const auto data = (root / "data").string();
  CHECK(run("--seed 7 --out " + data + " gen-corpus") == 0);
  CHECK(fs::exists(root / "data" / "transcripts.tsv"));
  CHECK(run("audit " + data) == 0);
  CHECK(run("--data " + data + " --out " + (root / "out").string() + " ingest --dump") == 0);
  CHECK(fs::exists(root / "out" / "ingest" / "instances_single.tsv"));
  CHECK(run("--data " + data + " --set exp1.n_per_class=100000 audit") == 2);
  CHECK(run("--data " + data + " --out " + (root / "out").string() +
            " --set exp1.n_per_class=30 eval --algorithm NB --group B --features --model") == 0);
  CHECK(fs::exists(root / "out" / "eval" / "NB_B" / "confusion.csv"));
  CHECK(fs::exists(root / "out" / "eval" / "NB_B" / "features.csv"));
  CHECK(fs::exists(root / "out" / "eval" / "NB_B" / "model.txt"));
  CHECK(run("--out " + (root / "empty").string() + " report") == 2);
  fs::remove_all(root);
}
