#pragma once

// Synthetic scenarios with embedded ground truth. Every generator is a pure
// function of its seed.
//
//   negsel-bits    self.csv, test.csv (all 2^8 strings, labelled), truth.csv, negsel.json
//   clonal-class   train.csv, test.csv (three Gaussian blobs), clonal.json
//   sphere-opt     clonal.json, truth.json (known optimum)
//   dca-canonical  stream.csv, truth.csv, dca.json

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ais/dca.hpp"
#include "ais/harness/datasets.hpp"

namespace ais::harness {

std::vector<std::string> scenario_names();

/// Writes the scenario into out_dir and returns the files written, in order.
/// Throws std::invalid_argument for an unknown name.
std::vector<std::filesystem::path> generate_scenario(const std::string& name, std::uint64_t seed,
                                                     const std::filesystem::path& out_dir);

struct NegselBitsScenario {
  std::size_t length = 8;
  LabeledDataset self;
  /// Every string of the space in lexicographic order.
  LabeledDataset test;
};

NegselBitsScenario negsel_bits_scenario(std::uint64_t seed);

struct ClonalClassScenario {
  ClassDataset train;
  ClassDataset test;
};

ClonalClassScenario clonal_class_scenario(std::uint64_t seed);

struct DcaScenario {
  std::vector<dca::StreamEvent> stream;
  dca::DcaConfig config;
  /// Antigen type arriving under safe-only frames.
  std::string safe_type = "A";
  /// Antigen type arriving under pamp/danger frames.
  std::string pamp_type = "B";
};

/// Safe phase (type A with safe-only frames), safe tail that lets every cell
/// present, pamp lead-in that lets every cell reset, pamp phase (type B),
/// pamp tail.
DcaScenario dca_canonical_scenario(std::uint64_t seed);

}  // namespace ais::harness
