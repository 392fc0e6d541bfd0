// Copyright 2026 The emocolor Authors. All Rights Reserved.
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

// emocolor command-line entry point.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "emocolor/annotations.hpp"
#include "emocolor/corpus.hpp"
#include "emocolor/fetch.hpp"
#include "emocolor/image_io.hpp"
#include "emocolor/knowledge_base.hpp"
#include "emocolor/psychometrics.hpp"
#include "emocolor/report.hpp"
#include "emocolor/scoring.hpp"
#include "emocolor/service.hpp"

namespace {

using namespace emocolor;

enum ExitCode { kOk = 0, kInputFailure = 2, kConfigFailure = 3, kRuntimeFailure = 4 };

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ColorConfig {
  std::string partitions_path;
  std::string mapping_path;

  FuzzyColorSpace space() const {
    return partitions_path.empty() ? FuzzyColorSpace::default_space()
                                   : FuzzyColorSpace::from_text(read_text(partitions_path));
  }
  BasicColorMapping mapping() const {
    return mapping_path.empty() ? BasicColorMapping::default_mapping()
                                : BasicColorMapping::from_text(read_text(mapping_path));
  }
};

void log_fingerprint(const std::string& fp) {
  std::cerr << "emocolor: color configuration fingerprint " << fp << "\n";
}

httplib::Server* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Color-emotion association toolkit over a 120-color fuzzy HSI model"};
  app.require_subcommand(1);

  ColorConfig colors;
  app.add_option("--partitions", colors.partitions_path, "Partition configuration file (JSON)");
  app.add_option("--mapping", colors.mapping_path, "Basic-color mapping table (JSON)");

  // partitions / mapping
  auto* partitions_cmd = app.add_subcommand("partitions", "Print the default partition configuration");
  auto* mapping_cmd = app.add_subcommand("mapping", "Print the default basic-color mapping table");

  // select
  std::string annotations;
  std::vector<std::string> threshold_overrides;
  auto* select_cmd = app.add_subcommand("select", "Count images selected per emotion from annotations");
  select_cmd->add_option("annotations", annotations, "WikiArt Emotions TSV")->required();
  select_cmd->add_option("--threshold", threshold_overrides, "emotion=fraction override");

  // build-kb
  std::string kb_path = "emocolor-kb.json";
  std::string image_dir;
  std::string cache_dir;
  CorpusOptions corpus;
  auto* build_cmd = app.add_subcommand("build-kb", "Build the knowledge base from an annotated corpus");
  build_cmd->add_option("annotations", annotations, "WikiArt Emotions TSV")->required();
  build_cmd->add_option("--kb", kb_path, "Output knowledge base path");
  build_cmd->add_option("--image-dir", image_dir, "Read images as <dir>/<ID>.{png,jpg} instead of fetching");
  build_cmd->add_option("--cache-dir", cache_dir, "Fetch cache directory (default $EMOCOLOR_CACHE_DIR)");
  build_cmd->add_option("--threshold", threshold_overrides, "emotion=fraction override");
  build_cmd->add_option("--k-image", corpus.params.k_image, "Dominant colors per image")->check(CLI::PositiveNumber);
  build_cmd->add_option("--k-emotion", corpus.params.k_emotion, "Colors kept per emotion")->check(CLI::PositiveNumber);
  build_cmd->add_option("--min-share", corpus.params.min_share, "Minimum share of a kept emotion color");
  build_cmd->add_option("--workers", corpus.workers, "Worker threads")->check(CLI::PositiveNumber);
  build_cmd->add_option("--max-failure", corpus.max_failure_fraction,
                        "Largest tolerated fraction of failing images")->check(CLI::Range(0.0, 1.0));

  // palette
  std::vector<std::string> images;
  std::size_t k_image = kDefaultImagePaletteSize;
  auto* palette_cmd = app.add_subcommand("palette", "Print dominant fuzzy palettes of images");
  palette_cmd->add_option("images", images, "Image files")->required();
  palette_cmd->add_option("--k-image", k_image, "Dominant colors per image")->check(CLI::PositiveNumber);

  // tag
  std::string query_text;
  bool weighted = false;
  auto* tag_cmd = app.add_subcommand("tag", "Rank emotions for images against a knowledge base");
  tag_cmd->add_option("images", images, "Image files")->required();
  tag_cmd->add_option("--kb", kb_path, "Knowledge base")->required();
  tag_cmd->add_option("--query", query_text, "Fuzzy query such as \"very high trust\"");
  tag_cmd->add_flag("--weighted", weighted, "Proportion-weighted similarity instead of set Jaccard");

  // report
  std::string out_dir = "emocolor-report";
  auto* report_cmd = app.add_subcommand("report", "Write distribution tables, the basic-color matrix and images");
  report_cmd->add_option("--kb", kb_path, "Knowledge base")->required();
  report_cmd->add_option("--out", out_dir, "Output directory");

  // analyze-2afc
  std::string trials_path;
  TwoAfcOptions afc;
  std::string scale = "observed", monotonize = "none";
  auto* afc_cmd = app.add_subcommand("analyze-2afc", "Analyze 2AFC trial data");
  afc_cmd->add_option("trials", trials_path, "Trial TSV")->required();
  afc_cmd->add_option("--out", out_dir, "Output directory");
  afc_cmd->add_option("--x-first", afc.sk.x_first, "Lower augmentation stimulus (p = 0)");
  afc_cmd->add_option("--x-last", afc.sk.x_last, "Upper augmentation stimulus (p = 1)");
  afc_cmd->add_option("--scale", scale, "observed | transformed")->check(CLI::IsMember({"observed", "transformed"}));
  afc_cmd->add_option("--monotonize", monotonize, "none | pava")->check(CLI::IsMember({"none", "pava"}));

  // serve
  ServiceConfig service;
  std::string bind = "127.0.0.1:8080";
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP retrieval service");
  serve_cmd->add_option("--kb", service.kb_path, "Knowledge base")->required();
  serve_cmd->add_option("--bind", bind, "host:port");
  serve_cmd->add_option("--index-dir", service.index_dir, "Image index directory");
  serve_cmd->add_option("--cors-origin", service.cors_origin, "Allowed CORS origin");
  serve_cmd->add_option("--cache-dir", cache_dir, "Enable POST /images by URL with this cache");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputFailure;
  }

  try {
    if (partitions_cmd->parsed()) {
      std::cout << kDefaultPartitionConfig << "\n";
      return kOk;
    }
    if (mapping_cmd->parsed()) {
      std::cout << kDefaultMappingTable << "\n";
      return kOk;
    }

    const auto space = colors.space();
    const auto mapping = colors.mapping();
    const auto fingerprint = config_fingerprint(space, mapping);
    log_fingerprint(fingerprint);

    auto thresholds = default_thresholds();
    for (const auto& o : threshold_overrides) apply_threshold_override(thresholds, o);

    if (select_cmd->parsed()) {
      const auto loaded = load_annotations(annotations, thresholds);
      std::cout << "emotion\timages\n";
      for (auto e : kAllEmotions) {
        std::cout << name_of(e) << "\t" << loaded.selection[std::size_t(e)].size() << "\n";
      }
      std::cerr << loaded.table.records.size() << " rows read, " << loaded.table.skipped_rows
                << " skipped\n";
      return kOk;
    }

    if (build_cmd->parsed()) {
      const auto loaded = load_annotations(annotations, thresholds);
      if (loaded.table.skipped_rows) {
        std::cerr << loaded.table.skipped_rows << " unreadable annotation rows skipped\n";
      }
      ImageSource source;
      if (!image_dir.empty()) {
        source = directory_source(image_dir);
      } else {
        const auto cache = FetchClient(cache_dir).cache_dir();
        source = [cache](const ImageRef& ref) { return FetchClient(cache).fetch(ref.url); };
      }
      const auto built = build_kb(loaded.selection, source, space, mapping, corpus);
      save_kb(built.kb, kb_path);
      std::cout << "emotion\tselected\tused\tpalette_colors\n";
      for (auto e : kAllEmotions) {
        const auto i = std::size_t(e);
        std::cout << name_of(e) << "\t" << built.report.selected[i] << "\t" << built.report.used[i]
                  << "\t" << built.report.palette_sizes[i] << "\n";
      }
      std::cout << "unique images: " << built.report.unique_images
                << ", failed: " << built.report.failures.size() << "\n";
      for (const auto& f : built.report.failures) std::cerr << "skipped " << f << "\n";
      std::cout << "knowledge base written to " << kb_path << "\n";
      return kOk;
    }

    if (palette_cmd->parsed()) {
      for (const auto& path : images) {
        const auto palette = dominant_palette(preprocess(read_file_bytes(path)), space, k_image);
        std::istringstream records(format_palette(palette));
        std::string line;
        while (std::getline(records, line)) std::cout << path << "\t" << line << "\n";
      }
      return kOk;
    }

    if (tag_cmd->parsed()) {
      const auto kb = load_kb(kb_path, fingerprint);
      const auto intensity = default_intensity_variable();
      std::optional<Query> query;
      if (!query_text.empty()) query = parse_query(query_text, intensity);
      std::cout << "image\trank\temotion\tjaccard" << (query ? "\tquery_degree" : "") << "\n";
      for (const auto& path : images) {
        const auto palette =
            dominant_palette(preprocess(read_file_bytes(path)), space, kb.params.k_image);
        const auto scores =
            score_emotions(palette, kb, weighted ? SimilarityMode::kWeighted : SimilarityMode::kSet);
        std::size_t rank = 1;
        for (const auto& s : scores) {
          std::cout << path << "\t" << rank++ << "\t" << name_of(s.emotion) << "\t"
                    << fmt(s.jaccard, 6);
          if (query) {
            std::cout << "\t"
                      << (s.emotion == query->emotion ? fmt(match_degree(*query, s.jaccard, intensity), 6)
                                                      : std::string("-"));
          }
          std::cout << "\n";
        }
      }
      return kOk;
    }

    if (report_cmd->parsed()) {
      const auto kb = load_kb(kb_path, fingerprint);
      for (const auto& p : write_kb_report(kb, space, out_dir)) std::cout << p.string() << "\n";
      return kOk;
    }

    if (afc_cmd->parsed()) {
      afc.sk.scale = scale == "transformed" ? ProbabilityScale::kTransformed : ProbabilityScale::kObserved;
      afc.sk.monotonize = monotonize == "pava" ? Monotonization::kPava : Monotonization::kNone;
      const auto participants = load_trials(trials_path);
      const auto report = analyze_2afc(participants, afc);
      std::cout << to_text(report);
      for (const auto& p : write_2afc_report(report, out_dir)) std::cerr << "wrote " << p.string() << "\n";
      return kOk;
    }

    if (serve_cmd->parsed()) {
      const auto colon = bind.rfind(':');
      if (colon == std::string::npos) throw ConfigError("--bind must be host:port");
      const auto host = bind.substr(0, colon);
      const int port = std::stoi(bind.substr(colon + 1));
      if (!cache_dir.empty()) service.fetch_cache = cache_dir;
      Service svc(service, space, mapping);
      httplib::Server server;
      svc.install(server);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "emocolor: serving on " << host << ":" << port << "\n";
      if (!server.listen(host, port)) {
        std::cerr << "emocolor: cannot bind " << bind << "\n";
        return kRuntimeFailure;
      }
      return kOk;
    }
  } catch (const FingerprintMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const KbError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == KbError::Kind::kVersion ? kConfigFailure : kInputFailure;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputFailure;
  } catch (const QueryError& e) {
    std::cerr << "query error: " << e.what() << "\n";
    return kInputFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kOk;
}
