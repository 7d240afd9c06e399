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

#include "dcen/dataset_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "dataset blobs are defined little-endian");

namespace dcen {

namespace fs = std::filesystem;

namespace {

constexpr char kBlobMagic[4] = {'D', 'C', 'S', '1'};

std::string fmt_float(float v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
  return buf;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int_field(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": expected integer, got '" + s + "'");
  }
}

float parse_float_field(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    float v = std::stof(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": expected number, got '" + s + "'");
  }
}

void write_u32(std::ofstream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::ifstream& is, const std::string& where) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw ParseError(where + ": truncated record");
  return v;
}

std::string blob_name(Index sample_index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "sample_%06lld.bin", static_cast<long long>(sample_index));
  return buf;
}

}  // namespace

void save_dataset(const GZSLDataset& ds, const fs::path& out_dir) {
  fs::create_directories(out_dir / "data");

  {
    std::ofstream os(out_dir / "attributes.csv");
    if (!os) throw std::runtime_error("cannot write " + (out_dir / "attributes.csv").string());
    os << "class_id";
    for (Index j = 0; j < ds.attributes.attr_dim(); ++j) os << ",a_" << j;
    os << "\n";
    for (Index i = 0; i < ds.attributes.num_classes(); ++i) {
      os << ds.attributes.class_ids[static_cast<std::size_t>(i)];
      for (Index j = 0; j < ds.attributes.attr_dim(); ++j)
        os << "," << fmt_float(ds.attributes.values(i, j));
      os << "\n";
    }
  }

  {
    std::ofstream os(out_dir / "split.txt");
    if (!os) throw std::runtime_error("cannot write " + (out_dir / "split.txt").string());
    for (int c : ds.seen_classes) os << c << ",seen\n";
    for (int c : ds.unseen_classes) os << c << ",unseen\n";
  }

  {
    std::ofstream idx(out_dir / "data" / "index.csv");
    if (!idx) throw std::runtime_error("cannot write dataset index");
    idx << "sample_id,class_id,split,file\n";
    for (Index i = 0; i < ds.num_samples(); ++i) {
      const std::string name = blob_name(i);
      idx << ds.sample_ids[static_cast<std::size_t>(i)] << ","
          << ds.labels[static_cast<std::size_t>(i)] << ","
          << split_tag_name(ds.split[static_cast<std::size_t>(i)]) << "," << name << "\n";

      std::ofstream os(out_dir / "data" / name, std::ios::binary);
      if (!os) throw std::runtime_error("cannot write sample blob " + name);
      os.write(kBlobMagic, 4);
      write_u32(os, static_cast<std::uint32_t>(ds.sample_ids[static_cast<std::size_t>(i)]));
      write_u32(os, static_cast<std::uint32_t>(ds.labels[static_cast<std::size_t>(i)]));
      write_u32(os, static_cast<std::uint32_t>(ds.shape.dims.size()));
      for (Index d : ds.shape.dims) write_u32(os, static_cast<std::uint32_t>(d));
      const Eigen::RowVectorXf row = ds.samples.row(i);
      os.write(reinterpret_cast<const char*>(row.data()),
               static_cast<std::streamsize>(sizeof(float)) * row.size());
    }
  }
}

GZSLDataset load_dataset(const fs::path& attr_path, const fs::path& split_path,
                         const fs::path& data_dir) {
  GZSLDataset ds;

  // --- attributes.csv ---
  {
    std::ifstream is(attr_path);
    if (!is) throw ParseError("cannot open attribute file " + attr_path.string());
    std::string line;
    if (!std::getline(is, line))
      throw ParseError(attr_path.string() + ": empty attribute file");
    const auto header = split_commas(line);
    if (header.empty() || header[0] != "class_id")
      throw ParseError(attr_path.string() + ":1: header must start with class_id");
    const Index attr_dim = static_cast<Index>(header.size()) - 1;
    if (attr_dim < 1) throw ParseError(attr_path.string() + ":1: no attribute columns");

    std::vector<int> ids;
    std::vector<std::vector<float>> rows;
    int lineno = 1;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto fields = split_commas(line);
      const std::string where = attr_path.string() + ":" + std::to_string(lineno);
      if (static_cast<Index>(fields.size()) - 1 != attr_dim)
        throw ParseError(where + ": dimension mismatch, expected " + std::to_string(attr_dim) +
                         " attribute values, got " + std::to_string(fields.size() - 1));
      ids.push_back(parse_int_field(fields[0], where));
      std::vector<float> row;
      for (std::size_t j = 1; j < fields.size(); ++j)
        row.push_back(parse_float_field(fields[j], where));
      rows.push_back(std::move(row));
    }
    ds.attributes.values.resize(static_cast<Index>(rows.size()), attr_dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (Index j = 0; j < attr_dim; ++j) ds.attributes.values(static_cast<Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    ds.attributes.class_ids = std::move(ids);
  }

  // --- split file ---
  {
    std::ifstream is(split_path);
    if (!is) throw ParseError("cannot open split file " + split_path.string());
    std::string line;
    int lineno = 0;
    std::set<int> assigned;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty() || line == "\r") continue;
      const std::string where = split_path.string() + ":" + std::to_string(lineno);
      const auto fields = split_commas(line);
      if (fields.size() != 2) throw ParseError(where + ": expected 'class_id,{seen|unseen}'");
      const int cid = parse_int_field(fields[0], where);
      if (ds.attributes.row_of(cid) < 0)
        throw ParseError(where + ": split references unknown class id " + std::to_string(cid));
      if (assigned.count(cid))
        throw ParseError(where + ": class id " + std::to_string(cid) + " assigned twice");
      assigned.insert(cid);
      if (fields[1] == "seen") ds.seen_classes.push_back(cid);
      else if (fields[1] == "unseen") ds.unseen_classes.push_back(cid);
      else throw ParseError(where + ": domain must be 'seen' or 'unseen', got '" + fields[1] + "'");
    }
    std::sort(ds.seen_classes.begin(), ds.seen_classes.end());
    std::sort(ds.unseen_classes.begin(), ds.unseen_classes.end());
  }

  // --- data/index.csv and blobs ---
  {
    const fs::path index_path = data_dir / "index.csv";
    std::ifstream is(index_path);
    if (!is) throw ParseError("cannot open dataset index " + index_path.string());
    std::string line;
    if (!std::getline(is, line) || split_commas(line) != std::vector<std::string>{
                                       "sample_id", "class_id", "split", "file"})
      throw ParseError(index_path.string() + ":1: bad index header");

    struct Record {
      int sample_id, class_id;
      SplitTag tag;
      std::string file;
    };
    std::vector<Record> records;
    int lineno = 1;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty()) continue;
      const std::string where = index_path.string() + ":" + std::to_string(lineno);
      const auto fields = split_commas(line);
      if (fields.size() != 4) throw ParseError(where + ": expected 4 fields");
      Record rec;
      rec.sample_id = parse_int_field(fields[0], where);
      rec.class_id = parse_int_field(fields[1], where);
      if (!split_tag_from_name(fields[2], &rec.tag))
        throw ParseError(where + ": unknown split tag '" + fields[2] + "'");
      if (ds.attributes.row_of(rec.class_id) < 0)
        throw ParseError(where + ": index references unknown class id " +
                         std::to_string(rec.class_id));
      rec.file = fields[3];
      records.push_back(std::move(rec));
    }

    for (std::size_t i = 0; i < records.size(); ++i) {
      const Record& rec = records[i];
      const fs::path blob_path = data_dir / rec.file;
      const std::string where = blob_path.string();
      std::ifstream bs(blob_path, std::ios::binary);
      if (!bs) throw ParseError("cannot open sample blob " + where);
      char magic[4];
      bs.read(magic, 4);
      if (!bs || std::memcmp(magic, kBlobMagic, 4) != 0)
        throw ParseError(where + ": bad magic, not a sample blob");
      const std::uint32_t sample_id = read_u32(bs, where);
      const std::uint32_t class_id = read_u32(bs, where);
      if (static_cast<int>(sample_id) != rec.sample_id)
        throw ParseError(where + ": sample_id " + std::to_string(sample_id) +
                         " does not match index entry " + std::to_string(rec.sample_id));
      if (static_cast<int>(class_id) != rec.class_id)
        throw ParseError(where + ": class_id " + std::to_string(class_id) +
                         " does not match index entry " + std::to_string(rec.class_id));
      const std::uint32_t ndim = read_u32(bs, where);
      if (ndim != 1 && ndim != 3)
        throw ParseError(where + ": unsupported tensor rank " + std::to_string(ndim));
      TensorShape shape;
      for (std::uint32_t k = 0; k < ndim; ++k)
        shape.dims.push_back(static_cast<Index>(read_u32(bs, where)));

      if (i == 0) {
        ds.shape = shape;
        ds.samples.resize(static_cast<Index>(records.size()), ds.shape.flat_size());
      } else if (!(shape == ds.shape)) {
        throw ParseError(where + ": tensor shape differs from the first record");
      }

      Eigen::RowVectorXf row(ds.shape.flat_size());
      bs.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(sizeof(float)) * row.size());
      if (!bs) throw ParseError(where + ": truncated tensor data");
      ds.samples.row(static_cast<Index>(i)) = row;
      ds.labels.push_back(rec.class_id);
      ds.sample_ids.push_back(rec.sample_id);
      ds.split.push_back(rec.tag);
    }
    if (records.empty()) {
      ds.shape.dims = {0};
      ds.samples.resize(0, 0);
    }
  }

  const ValidationReport rep = validate_dataset(ds);
  if (!rep.ok) {
    std::ostringstream os;
    os << "loaded dataset fails validation:";
    for (const std::string& s : rep.issues) os << "\n  " << s;
    throw ParseError(os.str());
  }
  return ds;
}

GZSLDataset load_dataset_dir(const fs::path& dir) {
  return load_dataset(dir / "attributes.csv", dir / "split.txt", dir / "data");
}

}  // namespace dcen
