// Copyright (c) 2026 the dcen authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dcen/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "dcen/config.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint archives are defined little-endian");

namespace dcen {

namespace {

constexpr char kMagic[8] = {'D', 'C', 'E', 'N', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

struct Section {
  const char* name;
  const VecXf* vec;
};

void write_u32(std::ofstream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::ifstream& is, const std::string& where) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw ParseError(where + ": truncated checkpoint");
  return v;
}

}  // namespace

void save_checkpoint(const TrainState& state, const TrainConfig& cfg,
                     const std::filesystem::path& path) {
  const Section sections[] = {
      {"visual_params", &state.encoders.visual.params_},
      {"visual_state", &state.encoders.visual.state_},
      {"momentum_params", &state.encoders.momentum.params_},
      {"momentum_state", &state.encoders.momentum.state_},
      {"semantic_params", &state.encoders.semantic.params_},
      {"semantic_state", &state.encoders.semantic.state_},
      {"decoder_params", &state.encoders.decoder.params_},
      {"decoder_state", &state.encoders.decoder.state_},
      {"vel_visual", &state.vel_visual},
      {"vel_semantic", &state.vel_semantic},
      {"vel_decoder", &state.vel_decoder},
  };

  nlohmann::json header;
  header["config"] = train_config_to_json(cfg);
  header["step"] = state.step;
  header["rng_state"] = state.rng.state();
  header["queue"] = {{"capacity", state.queue.capacity()},
                     {"dim", state.queue.dim()},
                     {"length", state.queue.length},
                     {"cursor", state.queue.cursor}};
  nlohmann::json sec = nlohmann::json::array();
  for (const Section& s : sections) sec.push_back({{"name", s.name}, {"count", s.vec->size()}});
  sec.push_back({{"name", "queue_buffer"}, {"count", state.queue.buffer.size()}});
  header["sections"] = sec;

  const std::string json_bytes = header.dump();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write checkpoint " + path.string());
  os.write(kMagic, sizeof(kMagic));
  write_u32(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(json_bytes.size()));
  os.write(json_bytes.data(), static_cast<std::streamsize>(json_bytes.size()));
  for (const Section& s : sections)
    os.write(reinterpret_cast<const char*>(s.vec->data()),
             static_cast<std::streamsize>(sizeof(float)) * s.vec->size());
  os.write(reinterpret_cast<const char*>(state.queue.buffer.data()),
           static_cast<std::streamsize>(sizeof(float)) * state.queue.buffer.size());
}

TrainState load_checkpoint(const std::filesystem::path& path, TrainConfig* cfg_out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open checkpoint " + path.string());
  const std::string where = path.string();

  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ParseError(where + ": not a checkpoint archive (bad magic)");
  const std::uint32_t version = read_u32(is, where);
  if (version != kVersion)
    throw ParseError(where + ": unsupported checkpoint version " + std::to_string(version));
  const std::uint32_t json_len = read_u32(is, where);
  std::string json_bytes(json_len, '\0');
  is.read(json_bytes.data(), json_len);
  if (!is) throw ParseError(where + ": truncated checkpoint header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(json_bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(where + ": corrupt checkpoint header: " + e.what());
  }

  const TrainConfig cfg = train_config_from_json(header.at("config"));
  if (cfg_out) *cfg_out = cfg;

  TrainState state;
  state.encoders.arch = cfg.arch;
  state.encoders.visual = VisualNet<float>(cfg.arch);
  state.encoders.momentum = VisualNet<float>(cfg.arch);
  state.encoders.semantic = SemanticNet<float>(cfg.arch);
  state.encoders.decoder = DecoderNet<float>(cfg.arch);
  state.step = header.at("step").get<Index>();
  state.rng.set_state(header.at("rng_state").get<std::uint64_t>());

  const auto& q = header.at("queue");
  state.queue = NegativeQueue<float>(q.at("capacity").get<Index>(), q.at("dim").get<Index>());
  state.queue.length = q.at("length").get<Index>();
  state.queue.cursor = q.at("cursor").get<Index>();

  VecXf* const targets[] = {
      &state.encoders.visual.params_,   &state.encoders.visual.state_,
      &state.encoders.momentum.params_, &state.encoders.momentum.state_,
      &state.encoders.semantic.params_, &state.encoders.semantic.state_,
      &state.encoders.decoder.params_,  &state.encoders.decoder.state_,
      &state.vel_visual,                &state.vel_semantic,
      &state.vel_decoder,
  };
  const auto& sections = header.at("sections");
  if (sections.size() != std::size(targets) + 1)
    throw ParseError(where + ": unexpected section count");
  for (std::size_t i = 0; i < std::size(targets); ++i) {
    const Index count = sections.at(i).at("count").get<Index>();
    if (targets[i]->size() > 0 && targets[i]->size() != count)
      throw ParseError(where + ": section '" +
                       sections.at(i).at("name").get<std::string>() +
                       "' does not match the architecture");
    targets[i]->resize(count);
    is.read(reinterpret_cast<char*>(targets[i]->data()),
            static_cast<std::streamsize>(sizeof(float)) * count);
    if (!is) throw ParseError(where + ": truncated section data");
  }
  const Index qcount = sections.at(std::size(targets)).at("count").get<Index>();
  if (qcount != state.queue.buffer.size())
    throw ParseError(where + ": queue buffer size mismatch");
  is.read(reinterpret_cast<char*>(state.queue.buffer.data()),
          static_cast<std::streamsize>(sizeof(float)) * qcount);
  if (!is) throw ParseError(where + ": truncated queue data");

  return state;
}

}  // namespace dcen
