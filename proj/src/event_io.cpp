#include "sas/event_io.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "sas/csv.hpp"
#include "sas/errors.hpp"

namespace sas {

namespace {

void put_u64_le(std::ostream& out, std::uint64_t v) {
  std::array<unsigned char, 8> b;
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = (v >> (8 * i)) & 0xff;
  out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t get_u64_le(std::istream& in, const std::string& source, const char* what) {
  std::array<unsigned char, 8> b;
  if (!in.read(reinterpret_cast<char*>(b.data()), 8))
    throw data_error(source + ": truncated " + what);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
  return v;
}

EventStream finish_stream(std::vector<EventRecord> records) {
  EventStream s;
  s.records = std::move(records);
  s.n_pulses = s.records.empty() ? 0 : s.records.back().pulse_index + 1;
  s.rep_rate_hz = 0.0;
  s.seed = 0;
  s.validate();
  return s;
}

}  // namespace

void write_events_csv(const EventStream& stream, std::ostream& out) {
  out << "pulse_index,channel\n";
  for (const auto& r : stream.records)
    out << r.pulse_index << ',' << (r.channel == Channel::S ? "S" : "aS") << '\n';
}

EventStream read_events_csv(std::istream& in, const std::string& source_name) {
  const CsvTable table = read_csv(in, source_name);
  const std::size_t pulse_col = table.column("pulse_index");
  const std::size_t chan_col = table.column("channel");
  std::vector<EventRecord> records;
  records.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    EventRecord rec;
    rec.pulse_index = parse_u64(row.fields[pulse_col], source_name, row.line, "pulse_index");
    const std::string& ch = row.fields[chan_col];
    if (ch == "S" || ch == "0") {
      rec.channel = Channel::S;
    } else if (ch == "aS" || ch == "1") {
      rec.channel = Channel::aS;
    } else {
      throw data_error(source_name + ":" + std::to_string(row.line) + ": bad channel '" + ch +
                       "' (expected S, aS, 0 or 1)");
    }
    records.push_back(rec);
  }
  return finish_stream(std::move(records));
}

void write_events_binary(const EventStream& stream, std::ostream& out) {
  out.write(kEventMagic, sizeof(kEventMagic));
  put_u64_le(out, stream.records.size());
  for (const auto& r : stream.records) {
    put_u64_le(out, r.pulse_index);
    const char ch = static_cast<char>(r.channel);
    out.write(&ch, 1);
  }
}

EventStream read_events_binary(std::istream& in, const std::string& source_name) {
  char magic[sizeof(kEventMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kEventMagic, sizeof(magic)) != 0)
    throw data_error(source_name + ": not an event-stream file (bad magic)");
  const std::uint64_t count = get_u64_le(in, source_name, "record count");
  std::vector<EventRecord> records;
  records.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    EventRecord rec;
    rec.pulse_index = get_u64_le(in, source_name, "record");
    char ch;
    if (!in.read(&ch, 1)) throw data_error(source_name + ": truncated record");
    if (ch != 0 && ch != 1)
      throw data_error(source_name + ": bad channel byte " +
                       std::to_string(static_cast<int>(ch)));
    rec.channel = static_cast<Channel>(ch);
    records.push_back(rec);
  }
  char extra;
  if (in.read(&extra, 1))
    throw data_error(source_name + ": trailing bytes after last record");
  return finish_stream(std::move(records));
}

void write_events_file(const EventStream& stream, const std::filesystem::path& path,
                       bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw data_error("cannot open " + path.string() + " for writing");
  if (binary) {
    write_events_binary(stream, out);
  } else {
    write_events_csv(stream, out);
  }
  if (!out) throw data_error("write failed on " + path.string());
}

EventStream read_events_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open " + path.string());
  char magic[sizeof(kEventMagic)];
  const bool is_binary =
      in.read(magic, sizeof(magic)) && std::memcmp(magic, kEventMagic, sizeof(magic)) == 0;
  in.clear();
  in.seekg(0);
  if (is_binary) return read_events_binary(in, path.filename().string());
  return read_events_csv(in, path.filename().string());
}

}  // namespace sas
