#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "pcc/corpus.hpp"
#include "pcc/error.hpp"
#include "pcc/random.hpp"
#include "support.hpp"

using namespace pcc;
using pcc::test::annotations;
using pcc::test::transcripts;

TEST_CASE("code names round-trip and are case-sensitive") {
  std::set<std::string_view> names;
  for (Code c : kAllCodes) {
    names.insert(code_name(c));
    CHECK(parse_code(code_name(c)) == c);
  }
  CHECK(names.size() == 12);
  CHECK_FALSE(parse_code("survtime"));
  CHECK_FALSE(parse_code(""));
  CHECK_FALSE(parse_manual_code("NotCoded"));
  CHECK(parse_manual_code("SurvTime") == Code::SurvTime);
}

TEST_CASE("physician_only holds for exactly three codes") {
  std::vector<Code> only;
  for (Code c : kAllCodes) {
    if (physician_only(c)) only.push_back(c);
  }
  CHECK(only == std::vector<Code>{Code::CancKnowl, Code::OpenDoor, Code::UnderSProg});
}

TEST_CASE("experiment class sets leave out the rare codes") {
  const auto classes = experiment_classes();
  CHECK(classes.size() == 7);
  CHECK(classes.back() == Code::NotCoded);
  for (Code rare : {Code::BestWorstCase, Code::CancKnowl, Code::DoubFram, Code::OpenDoor,
                    Code::UnderSProg}) {
    CHECK(std::find(classes.begin(), classes.end(), rare) == classes.end());
  }
  CHECK(canonical_classes({Code::NotCoded, Code::FurQol, Code::FurQol, Code::ChgforWorse}) ==
        std::vector<Code>{Code::ChgforWorse, Code::FurQol, Code::NotCoded});
}

TEST_CASE("parse_transcripts reads one utterance per row") {
  const auto u = transcripts("c1\t1\tD\tHello there.\n");
  REQUIRE(u.size() == 1);
  CHECK(u[0] == Utterance{"c1", 1, Speaker::Doctor, "Hello there."});
}

TEST_CASE("parse_transcripts tolerates CRLF and blank lines") {
  const auto u = transcripts("c1\t1\tD\tHi\r\n\nc1\t2\tP\tHello\r\n");
  REQUIRE(u.size() == 2);
  CHECK(u[1].text == "Hello");
  CHECK(u[1].speaker == Speaker::Patient);
}

TEST_CASE("parse_transcripts errors name the row") {
  auto row_of = [](const std::string& rows) -> std::size_t {
    try {
      transcripts(rows);
    } catch (const ParseError& e) {
      return e.row();
    }
    return 0;
  };
  CHECK(row_of("c1\t1\tD\ta\nc1\t1\tD\tb\n") == 3);  // duplicate line
  CHECK(row_of("c1\t1\tX\ta\n") == 2);               // unknown speaker
  CHECK(row_of("c1\t1\tD\ta\tb\n") == 2);            // extra tab
  CHECK(row_of("c1\t1\tD\n") == 2);                  // missing column
  CHECK(row_of("c1\t0\tD\ta\n") == 2);               // non-positive line
  CHECK(row_of("c1\tx\tD\ta\n") == 2);
  CHECK(row_of("c1\t2\tD\ta\nc1\t1\tD\tb\n") == 3);  // decreasing
  CHECK(row_of("c1\t1\tD\t\n") == 2);                // empty text

  std::istringstream bad_header("case\tline\tspeaker\ttext\n");
  CHECK_THROWS_AS(parse_transcripts(bad_header), ParseError);
  try {
    transcripts("c1\t1\tX\ta\n");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("transcripts.tsv:2") != std::string::npos);
  }
}

TEST_CASE("parse_annotations validates codes") {
  const auto a = annotations("c1\t4\tcoderA\tSurvTime\n");
  REQUIRE(a.size() == 1);
  CHECK(a[0] == Annotation{"c1", 4, "coderA", Code::SurvTime});
  CHECK_THROWS_AS(annotations("c1\t4\tcoderA\tNotCoded\n"), ParseError);
  CHECK_THROWS_AS(annotations("c1\t4\tcoderA\tsurvtime\n"), ParseError);
  CHECK_THROWS_AS(annotations("c1\t4\tcoderA\n"), ParseError);
}

TEST_CASE("parse_coders") {
  std::istringstream in(std::string(kCodersHeader) + "\nc1\t3\nc2\t1\n");
  const auto m = parse_coders(in);
  CHECK(m.at("c1") == 3);
  CHECK(m.at("c2") == 1);
  std::istringstream bad(std::string(kCodersHeader) + "\nc1\t0\n");
  CHECK_THROWS_AS(parse_coders(bad), ParseError);
}

TEST_CASE("merge_and_dedup collapses duplicate codes and keeps distinct ones") {
  const auto u = transcripts(
      "c1\t1\tD\tone\nc1\t2\tD\ttwo\nc1\t3\tP\tthree\nc1\t4\tD\tfour\n");
  const auto a = annotations(
      "c1\t1\tA\tSurvTime\nc1\t1\tB\tSurvTime\n"
      "c1\t2\tA\tSurvTime\nc1\t2\tB\tCurability\n"
      "c1\t3\tA\tFurQol\n");
  const auto pool = merge_and_dedup(u, a);
  CHECK(pool.size(Code::SurvTime) == 2);
  CHECK(pool.size(Code::Curability) == 1);
  CHECK(pool.size(Code::FurQol) == 0);  // patient line dropped
  REQUIRE(pool.size(Code::NotCoded) == 1);
  CHECK(pool.bucket(Code::NotCoded)[0].utterance.line_no == 4);
  CHECK(pool.total() == 4);

  const auto all = merge_and_dedup(u, a, Scope::All);
  CHECK(all.size(Code::FurQol) == 1);
  CHECK(all.total() == 5);
}

TEST_CASE("merge_and_dedup rejects dangling annotations") {
  const auto u = transcripts("c1\t1\tD\tone\n");
  try {
    merge_and_dedup(u, annotations("c1\t9\tA\tSurvTime\n"));
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("c1") != std::string::npos);
    CHECK(std::string(e.what()).find('9') != std::string::npos);
  }
}

TEST_CASE("merge_and_dedup buckets are canonical and duplicate free") {
  const auto& pool = pcc::test::small_corpus().pool;
  for (Code c : kAllCodes) {
    const auto& b = pool.bucket(c);
    for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i - 1].utterance.key() < b[i].utterance.key());
    for (const auto& line : b) CHECK(line.utterance.speaker == Speaker::Doctor);
  }
}

TEST_CASE("majority_filter uses a strict majority of the case's coders") {
  const auto a = annotations(
      "c3\t1\tA\tSurvTime\nc3\t1\tB\tSurvTime\n"
      "c4\t1\tA\tSurvTime\nc4\t1\tB\tSurvTime\n"
      "c1\t1\tA\tFurQol\n");
  const std::map<std::string, int> coders{{"c3", 3}, {"c4", 4}, {"c1", 1}};
  const auto kept = majority_filter(a, coders);
  std::set<std::string> cases;
  for (const auto& k : kept) cases.insert(k.case_id);
  CHECK(cases == std::set<std::string>{"c1", "c3"});
  CHECK_THROWS_AS(majority_filter(a, {{"c3", 3}}), DataError);
}

TEST_CASE("majority_filter is a subset and a fixpoint") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Annotation> a;
    std::map<std::string, int> coders;
    for (int c = 0; c < 4; ++c) {
      const std::string id = "c" + std::to_string(c);
      const int n = rng.between(1, 5);
      coders[id] = n;
      for (int line = 1; line <= 5; ++line) {
        for (int k = 0; k < n; ++k) {
          if (rng.bernoulli(0.5)) {
            a.push_back({id, line, "k" + std::to_string(k), rng.bernoulli(0.5) ? Code::SurvTime : Code::FurQol});
          }
        }
      }
    }
    const auto once = majority_filter(a, coders);
    for (const auto& x : once) CHECK(std::find(a.begin(), a.end(), x) != a.end());
    CHECK(majority_filter(once, coders) == once);
  }
}

TEST_CASE("attach_context takes the same-speaker run") {
  const auto u = transcripts(
      "c1\t1\tD\tone\nc1\t2\tD\ttwo\nc1\t3\tD\tthree\nc1\t4\tP\tfour\nc1\t5\tD\tfive\n"
      "c2\t1\tD\ta\nc2\t2\tD\tb\nc2\t3\tD\tc\nc2\t4\tD\td\n");
  const auto a = annotations("c1\t5\tA\tSurvTime\nc2\t4\tA\tChgforWorse\nc2\t1\tA\tFurQol\n");
  const auto pool = attach_context(merge_and_dedup(u, a), u);
  CHECK(pool.has_context());
  CHECK(pool.bucket(Code::SurvTime)[0].context.empty());
  const auto& ctx = pool.bucket(Code::ChgforWorse)[0].context;
  REQUIRE(ctx.size() == 3);
  CHECK(ctx[0].text == "a");
  CHECK(ctx[2].text == "c");
  CHECK(pool.bucket(Code::FurQol)[0].context.empty());

  const auto other = attach_context(merge_and_dedup(u, a), u, ContextMode::OtherSpeaker);
  REQUIRE(other.bucket(Code::SurvTime)[0].context.size() == 1);
  CHECK(other.bucket(Code::SurvTime)[0].context[0].text == "four");
}

TEST_CASE("attach_context stops at gaps in line numbers") {
  const auto u = transcripts("c1\t1\tD\tone\nc1\t3\tD\tthree\nc1\t4\tD\tfour\n");
  const auto pool = attach_context(merge_and_dedup(u, annotations("c1\t4\tA\tSurvTime\n")), u);
  REQUIRE(pool.bucket(Code::SurvTime)[0].context.size() == 1);
  CHECK(pool.bucket(Code::SurvTime)[0].context[0].line_no == 3);
}

TEST_CASE("context is a contiguous same-speaker slice ending at the target") {
  const auto& data = pcc::test::small_corpus();
  std::map<LineKey, const Utterance*> by_key;
  for (const auto& u : data.utterances) by_key[u.key()] = &u;
  for (Code c : kAllCodes) {
    for (const auto& line : data.pool.bucket(c)) {
      int expect = line.utterance.line_no - static_cast<int>(line.context.size());
      for (const auto& u : line.context) {
        CHECK(u.case_id == line.utterance.case_id);
        CHECK(u.speaker == line.utterance.speaker);
        CHECK(u.line_no == expect);
        ++expect;
      }
      // maximal: the line before the run is absent or spoken by the other side
      const auto before = by_key.find({line.utterance.case_id,
                                       line.utterance.line_no - static_cast<int>(line.context.size()) - 1});
      if (before != by_key.end()) CHECK(before->second->speaker != line.utterance.speaker);
    }
  }
}
