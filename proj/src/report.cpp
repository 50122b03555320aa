// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT

#include "provtrail/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <json.hpp>

#include "provtrail/actions.hpp"
#include "provtrail/error.hpp"

namespace provtrail {

namespace {

// Seed a Single annotation finally charges: the direct origin, or the end of
// its trace chain when resolving transitively.
std::string charged_seed(const Corpus& corpus, const Origin& origin, bool resolve_transitive) {
  if (!resolve_transitive || corpus.is_seed(origin.test_name)) {
    return origin.test_name;
  }
  const std::vector<Origin> chain = trace_to_seed(corpus, origin.test_name, origin.position);
  return chain.empty() ? origin.test_name : chain.back().test_name;
}

}  // namespace

ContributionTable contribution_table(const std::vector<Test>& tests, const Corpus& corpus,
                                     const ReportOptions& options) {
  ContributionTable table;
  for (const Test& t : tests) {
    table.total_components += t.components.size();

    // Run bookkeeping: consecutive Single annotations with the same source
    // and consecutive positions form one run; a weighted component is its own
    // length-1 run.
    std::optional<std::pair<Origin, size_t>> open;  // (next expected origin, length)
    auto close_open = [&] {
      if (open) {
        ++table.run_length_histogram[open->second];
        open.reset();
      }
    };

    for (const Component& c : t.components) {
      if (std::holds_alternative<std::monostate>(c.annotation)) {
        close_open();
        continue;
      }
      ++table.total_annotated;
      if (const auto* single = std::get_if<SingleAnnotation>(&c.annotation)) {
        const Component& origin_component = corpus.component_at(single->origin);
        table.by_seed[charged_seed(corpus, single->origin, options.resolve_transitive)] += 1.0;
        table.by_kind[options.abstract_kinds ? mask_action(origin_component.action)
                                             : origin_component.action] += 1.0;
        if (open && open->first == single->origin) {
          ++open->second;
          open->first.position = single->origin.position + 1;
        } else {
          close_open();
          open = {Origin{single->origin.test_name, single->origin.position + 1}, 1};
        }
        continue;
      }
      const auto& weighted = std::get<WeightedAnnotation>(c.annotation);
      double degree_sum = 0.0;
      for (const auto& [name, degree] : weighted.entries) {
        if (!corpus.contains(name)) {
          throw ProvenanceError(fmt::format("weighted annotation names unknown test '{}'", name));
        }
        if (options.resolve_transitive && !corpus.is_seed(name)) {
          throw ProvenanceError(fmt::format(
              "cannot resolve weighted provenance through generated test '{}'", name));
        }
        degree_sum += degree;
      }
      for (const auto& [name, degree] : weighted.entries) {
        table.by_seed[name] += degree / degree_sum;
      }
      table.by_kind[options.abstract_kinds ? mask_action(c.action) : c.action] += 1.0;
      close_open();
      ++table.run_length_histogram[1];
    }
    close_open();
  }
  return table;
}

namespace {

std::vector<std::pair<std::string, double>> ranked(const std::map<std::string, double>& counts) {
  std::vector<std::pair<std::string, double>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) {
      return a.second > b.second;
    }
    return a.first < b.first;
  });
  return out;
}

}  // namespace

std::vector<std::pair<std::string, double>> rank_kinds(const ContributionTable& table) {
  return ranked(table.by_kind);
}

std::string render(const ContributionTable& table, ReportFormat format) {
  if (format == ReportFormat::json) {
    nlohmann::json j;
    j["by_seed"] = nlohmann::json::object();
    for (const auto& [name, count] : table.by_seed) {
      j["by_seed"][name] = count;
    }
    j["by_kind"] = nlohmann::json::object();
    for (const auto& [kind, count] : table.by_kind) {
      j["by_kind"][kind] = count;
    }
    j["total_annotated"] = table.total_annotated;
    j["total_components"] = table.total_components;
    j["run_length_histogram"] = nlohmann::json::object();
    for (const auto& [length, count] : table.run_length_histogram) {
      j["run_length_histogram"][fmt::format("{}", length)] = count;
    }
    return j.dump(2) + "\n";
  }

  std::string out;
  auto section = [&](const char* title, const std::vector<std::pair<std::string, double>>& rows) {
    out += title;
    out += '\n';
    size_t width = 0;
    for (const auto& [name, count] : rows) {
      (void)count;
      width = std::max(width, name.size());
    }
    for (const auto& [name, count] : rows) {
      out += fmt::format("  {:<{}}  {}\n", name, width, count);
    }
  };
  section("by_seed", ranked(table.by_seed));
  section("by_kind", ranked(table.by_kind));
  out += "run_length_histogram\n";
  for (const auto& [length, count] : table.run_length_histogram) {
    out += fmt::format("  {}  {}\n", length, count);
  }
  out += fmt::format("totals annotated={} components={}\n", table.total_annotated,
                     table.total_components);
  return out;
}

ContributionTable table_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("invalid report json: {}", e.what()));
  }
  ContributionTable table;
  try {
    for (const auto& [name, count] : j.at("by_seed").items()) {
      table.by_seed[name] = count.get<double>();
    }
    for (const auto& [kind, count] : j.at("by_kind").items()) {
      table.by_kind[kind] = count.get<double>();
    }
    table.total_annotated = j.at("total_annotated").get<size_t>();
    table.total_components = j.at("total_components").get<size_t>();
    for (const auto& [length, count] : j.at("run_length_histogram").items()) {
      table.run_length_histogram[std::stoul(length)] = count.get<size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("malformed report json: {}", e.what()));
  }
  return table;
}

}  // namespace provtrail
