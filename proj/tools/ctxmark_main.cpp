//
// Copyright 2026 The ctxmark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// ctxmark command-line driver.
//
// Exit codes: 0 success, 1 other failure (including no decodable frame),
// 2 capacity shortfall, 3 backend/protocol mismatch, 4 input schema error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ctxmark/ctxmark.hpp"
#include "ctxmark/remote_backend.hpp"

namespace {

using ctxmark::BitStream;
using ctxmark::Document;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitCapacity = 2;
constexpr int kExitBackend = 3;
constexpr int kExitSchema = 4;

struct CapacityShortfall : ctxmark::Error {
  using ctxmark::Error::Error;
};

struct RunConfig {
  std::string backend;
  std::string backend_id;  // expected id for remote backends
  std::string cache;
  std::size_t f = 1;
  std::size_t k = ctxmark::kDefaultCandidateCount;
  double sr_threshold = ctxmark::kDefaultSrThreshold;
  std::string stopwords = ctxmark::default_stopwords_path();
  std::string report;
  std::size_t jobs = 1;
  std::size_t top_k = 10;
};

// Backend plus the objects it borrows from.
struct Session {
  std::unique_ptr<ctxmark::ModelBackend> base;
  std::unique_ptr<ctxmark::CachedBackend> cached;
  ctxmark::RiskConfig risk;
  ctxmark::CodecOptions codec;

  const ctxmark::ModelBackend& backend() const {
    return cached ? static_cast<const ctxmark::ModelBackend&>(*cached) : *base;
  }
};

Session open_session(const RunConfig& cfg) {
  Session s;
  std::string selector = cfg.backend;
  if (const char* env = std::getenv("REMOTE_BACKEND_URL"); env != nullptr && *env != '\0') {
    if (selector.empty() || selector.rfind("remote:", 0) == 0) selector = std::string("remote:") + env;
  }
  if (selector.rfind("stub:", 0) == 0) {
    s.base = std::make_unique<ctxmark::StubBackend>(ctxmark::StubBackend::from_file(selector.substr(5)));
  } else if (selector.rfind("remote:", 0) == 0) {
    s.base = std::make_unique<ctxmark::RemoteBackend>(selector.substr(7), cfg.backend_id);
  } else {
    throw ctxmark::SchemaError("--backend must be stub:PATH or remote:URL");
  }
  if (!cfg.cache.empty()) s.cached = std::make_unique<ctxmark::CachedBackend>(*s.base, cfg.cache);
  s.risk = ctxmark::load_stopwords(cfg.stopwords);
  s.codec.f = cfg.f;
  s.codec.sync.k = cfg.k;
  s.codec.sync.sr_threshold = cfg.sr_threshold;
  return s;
}

ordered_json config_json(const RunConfig& cfg, const Session& s) {
  return {{"backend", cfg.backend},
          {"backend_id", s.backend().backend_id()},
          {"f", cfg.f},
          {"k", cfg.k},
          {"sr_threshold", cfg.sr_threshold},
          {"stopwords_version", s.risk.version_id},
          {"top_k", cfg.top_k}};
}

ordered_json record_json(const ctxmark::CarrierRecord& r) {
  return {{"sentence_idx", r.sentence_idx}, {"position", r.position}, {"original", r.original},
          {"chosen", r.chosen},             {"c1", r.candidates->c1()}, {"c2", r.candidates->c2()},
          {"bit", r.bit}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ctxmark::Error("cannot write " + path);
  out << content;
}

void write_records(const std::string& path, const std::vector<ctxmark::CarrierRecord>& records) {
  if (path.empty()) return;
  std::string body;
  for (const auto& r : records) body += record_json(r).dump() + "\n";
  write_file(path, body);
}

void print(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static const char* kDigits = "0123456789abcdef";
  std::string out;
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

// Printable UTF-8 text, or nullopt.
std::optional<std::string> as_text(const std::vector<std::uint8_t>& bytes) {
  std::string s(bytes.begin(), bytes.end());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) return std::nullopt;
    if (len == 1 && c < 0x20 && c != '\n' && c != '\t') return std::nullopt;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return std::nullopt;
    }
    i += len;
  }
  return s;
}

struct EmbedArgs {
  std::string input, output, message_file, bits;
  bool bits_given = false;
  bool probe = false;
  bool strict_capacity = false;
};

int cmd_embed(const RunConfig& cfg, const EmbedArgs& a) {
  Session s = open_session(cfg);
  const Document doc = ctxmark::make_document(ctxmark::read_file(a.input));
  const auto& backend = s.backend();
  const std::size_t capacity = ctxmark::probe_capacity(doc, s.codec, backend, s.risk, cfg.jobs);

  if (a.probe) {
    print({{"command", "embed"}, {"config", config_json(cfg, s)}, {"capacity", capacity},
           {"words", ctxmark::count_words(doc)}});
    return kExitOk;
  }

  BitStream message;
  std::size_t required = 0;
  if (!a.message_file.empty()) {
    const std::string raw = ctxmark::read_file(a.message_file);
    const BitStream frame = ctxmark::frame_message({raw.begin(), raw.end()});
    required = frame.size();
    message = ctxmark::fill_cyclic(frame, std::max(capacity, frame.size()));
  } else if (a.bits_given) {
    try {
      message = ctxmark::bits_from_string(a.bits);
    } catch (const ctxmark::ContractViolation& e) {
      throw ctxmark::SchemaError(std::string("--bits: ") + e.what());
    }
    required = message.size();
  }
  if (required > capacity) {
    const std::string msg = "capacity " + std::to_string(capacity) + " bits < " +
                            std::to_string(required) + " bits required";
    if (a.strict_capacity) throw CapacityShortfall(msg);
    std::cerr << "warning: " << msg << "; message truncated\n";
  }

  ctxmark::VectorBitSource source(message);
  const auto result = ctxmark::embed_document(doc, source, s.codec, backend, s.risk);
  write_file(a.output, ctxmark::render_document(result.watermarked));
  write_records(cfg.report, result.report.records);

  const std::size_t words = ctxmark::count_words(doc);
  ordered_json summary = {{"command", "embed"},
                          {"config", config_json(cfg, s)},
                          {"capacity", capacity},
                          {"required_bits", required},
                          {"bits_embedded", result.report.bits_embedded},
                          {"tokens", result.report.words_scanned},
                          {"words", words}};
  summary["payload_bpw"] = words > 0 ? ordered_json(ctxmark::payload_bpw(result.report, words))
                                     : ordered_json(nullptr);
  print(summary);
  return kExitOk;
}

int cmd_extract(const RunConfig& cfg, const std::string& input, bool raw) {
  Session s = open_session(cfg);
  const Document doc = ctxmark::make_document(ctxmark::read_file(input));
  const auto ex = ctxmark::extract_document(doc, s.codec, s.backend(), s.risk, cfg.jobs);
  write_records(cfg.report, ex.carriers);

  ordered_json out = {{"command", "extract"},
                      {"config", config_json(cfg, s)},
                      {"bit_count", ex.bits.size()},
                      {"bits", ctxmark::bits_to_string(ex.bits)}};
  if (raw) {
    print(out);
    return kExitOk;
  }
  const auto frame = ctxmark::deframe_message(ex.bits);
  ordered_json fj = {{"complete", frame.complete},
                     {"declared_length", frame.declared_length},
                     {"repetitions", frame.repetitions},
                     {"consistent_headers", frame.consistent_headers},
                     {"payload_hex", to_hex(frame.payload)}};
  if (auto text = as_text(frame.payload)) fj["payload_text"] = *text;
  out["frame"] = fj;
  print(out);
  if (!frame.complete) {
    std::cerr << "warning: no complete frame in " << ex.bits.size() << " extracted bits (partial)\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_capacity(const RunConfig& cfg, const std::string& input) {
  Session s = open_session(cfg);
  const Document doc = ctxmark::make_document(ctxmark::read_file(input));
  const std::size_t capacity = ctxmark::probe_capacity(doc, s.codec, s.backend(), s.risk, cfg.jobs);
  const std::size_t frame_overhead = ctxmark::kLengthBits;
  print({{"command", "capacity"},
         {"config", config_json(cfg, s)},
         {"capacity", capacity},
         {"words", ctxmark::count_words(doc)},
         {"max_payload_bytes", capacity >= frame_overhead ? (capacity - frame_overhead) / 8 : 0}});
  return kExitOk;
}

int cmd_recover(const RunConfig& cfg, const std::string& input, const std::string& output,
                const std::string& original_path) {
  Session s = open_session(cfg);
  const Document doc = ctxmark::make_document(ctxmark::read_file(input));
  const auto rec = ctxmark::recover_document(doc, s.codec, s.backend(), s.risk, cfg.jobs);
  write_file(output, ctxmark::render_document(rec.recovered));

  ordered_json words = ordered_json::array();
  for (const auto& w : rec.words) {
    words.push_back({{"sentence_idx", w.sentence_idx}, {"position", w.position},
                     {"watermarked", w.watermarked}, {"recovered", w.recovered},
                     {"c1", w.c1}, {"c2", w.c2},
                     {"p1", w.p1}, {"p2", w.p2}});
  }
  ordered_json out = {{"command", "recover"}, {"config", config_json(cfg, s)}, {"positions", words}};
  if (!original_path.empty()) {
    const Document original = ctxmark::make_document(ctxmark::read_file(original_path));
    if (original.sentences.size() != doc.sentences.size()) {
      throw ctxmark::SchemaError("original and watermarked documents are not aligned");
    }
    ctxmark::EmbeddingReport report;
    for (const auto& w : rec.words) {
      report.records.push_back({w.sentence_idx, w.position,
                                original.sentences[w.sentence_idx].word(w.position), w.watermarked,
                                ctxmark::CandidatePair(w.c1, w.c2), 0});
    }
    const auto stats = ctxmark::recovery_proportion(rec.recovered, original, report);
    out["changed"] = stats.changed;
    out["recovered"] = stats.recovered;
    const auto p = stats.proportion();
    out["recovery_proportion"] = p ? ordered_json(*p) : ordered_json(nullptr);
  }
  print(out);
  return kExitOk;
}

int cmd_score(const RunConfig& cfg, const std::string& orig_path, const std::string& marked_path) {
  Session s = open_session(cfg);
  const Document a = ctxmark::make_document(ctxmark::read_file(orig_path));
  const Document b = ctxmark::make_document(ctxmark::read_file(marked_path));
  if (a.sentences.size() != b.sentences.size()) {
    throw ctxmark::SchemaError("documents have different sentence counts");
  }
  for (std::size_t i = 0; i < a.sentences.size(); ++i) {
    if (a.sentences[i].size() != b.sentences[i].size()) {
      throw ctxmark::SchemaError("sentence " + std::to_string(i) + " differs in token count");
    }
  }
  const auto scores = ctxmark::semantic_scores(a, b, s.backend());
  auto mean = [](const ctxmark::MeanAccumulator& m) {
    const auto v = m.mean();
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  print({{"command", "score"},
         {"config", config_json(cfg, s)},
         {"sentences", scores.sr.count()},
         {"sr", mean(scores.sr)},
         {"ss", mean(scores.ss)},
         {"changed_sentences", scores.sr_changed.count()},
         {"sr_changed", mean(scores.sr_changed)},
         {"ss_changed", mean(scores.ss_changed)}});
  return kExitOk;
}

int cmd_eval_swords(const RunConfig& cfg, const std::string& bench) {
  Session s = open_session(cfg);
  const auto instances = ctxmark::load_swords(bench);
  std::vector<std::vector<std::string>> outputs(instances.size());
  ctxmark::parallel_for(instances.size(), cfg.jobs, [&](std::size_t i) {
    const auto rw = ctxmark::lexical_substitution(instances[i].tokens, instances[i].target_position,
                                                  cfg.k, s.backend());
    for (const auto& c : rw.ranked) outputs[i].push_back(c.word);
  });

  ordered_json out = {{"command", "eval-swords"},
                      {"config", config_json(cfg, s)},
                      {"instances", instances.size()},
                      {"aggregation", "macro: P and R averaged per instance, F from the averages"}};
  for (auto mode : {ctxmark::SwordsMode::kLenient, ctxmark::SwordsMode::kStrict}) {
    const auto sc = ctxmark::swords_score(outputs, instances, cfg.top_k, mode);
    out[ctxmark::to_string(mode)] = {{"P", sc.precision()},   {"R", sc.recall()},
                                     {"F", sc.f()},           {"Pc", sc.precision_c()},
                                     {"Rc", sc.recall_c()},   {"Fc", sc.f_c()},
                                     {"undefined_precision", sc.undefined_precision()}};
  }
  print(out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-aware lexical-substitution text watermarking"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--backend", cfg.backend, "stub:PATH or remote:URL");
    sub->add_option("--backend-id", cfg.backend_id, "Expected backend id (remote)");
    sub->add_option("--cache", cfg.cache, "On-disk response cache (JSON lines)");
    sub->add_option("--f", cfg.f, "Minimum carrier spacing")->check(CLI::PositiveNumber);
    sub->add_option("--k", cfg.k, "Candidates per slot");
    sub->add_option("--sr-threshold", cfg.sr_threshold, "SR threshold for final candidates")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--stopwords", cfg.stopwords, "Stopword file");
    sub->add_option("--report", cfg.report, "Write per-carrier JSON lines here");
    sub->add_option("--jobs", cfg.jobs, "Concurrent sentence workers")->check(CLI::PositiveNumber);
  };

  EmbedArgs embed;
  auto* embed_cmd = app.add_subcommand("embed", "Embed a message");
  common(embed_cmd);
  embed_cmd->add_option("input", embed.input)->required();
  embed_cmd->add_option("-o,--output", embed.output);
  auto* msg_opt = embed_cmd->add_option("--message", embed.message_file, "Message file (raw bytes)");
  embed_cmd->add_option("--bits", embed.bits, "Raw bit string, e.g. 0101")->excludes(msg_opt);
  embed_cmd->add_flag("--probe-capacity", embed.probe, "Print capacity and exit");
  embed_cmd->add_flag("--strict-capacity", embed.strict_capacity, "Fail when the message does not fit");

  std::string input, output, other;
  bool raw = false;
  auto* extract_cmd = app.add_subcommand("extract", "Extract a message");
  common(extract_cmd);
  extract_cmd->add_option("input", input)->required();
  extract_cmd->add_flag("--raw", raw, "Print bits only, no deframing");

  auto* capacity_cmd = app.add_subcommand("capacity", "Report carrier capacity");
  common(capacity_cmd);
  capacity_cmd->add_option("input", input)->required();

  auto* recover_cmd = app.add_subcommand("recover", "Restore likely original words");
  common(recover_cmd);
  recover_cmd->add_option("input", input)->required();
  recover_cmd->add_option("-o,--output", output)->required();
  recover_cmd->add_option("--original", other, "Original text, to measure recovery");

  std::string marked;
  auto* score_cmd = app.add_subcommand("score", "SR/SS between original and watermarked text");
  common(score_cmd);
  score_cmd->add_option("original", other)->required();
  score_cmd->add_option("watermarked", marked)->required();

  auto* swords_cmd = app.add_subcommand("eval-swords", "Score lexical substitution on a benchmark");
  common(swords_cmd);
  swords_cmd->add_option("benchmark", input)->required();
  swords_cmd->add_option("--top-k", cfg.top_k, "k for P/R/F")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*embed_cmd) {
      embed.bits_given = embed_cmd->count("--bits") > 0;
      if (!embed.probe && embed.output.empty()) throw CLI::RequiredError("--output");
      return cmd_embed(cfg, embed);
    }
    if (*extract_cmd) return cmd_extract(cfg, input, raw);
    if (*capacity_cmd) return cmd_capacity(cfg, input);
    if (*recover_cmd) return cmd_recover(cfg, input, output, other);
    if (*score_cmd) return cmd_score(cfg, other, marked);
    if (*swords_cmd) return cmd_eval_swords(cfg, input);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const CapacityShortfall& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const ctxmark::BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const ctxmark::ProtocolMismatch& e) {
    std::cerr << "backend mismatch: " << e.what() << "\n";
    return kExitBackend;
  } catch (const ctxmark::SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
