#ifndef SAS_EVENT_IO_HPP
#define SAS_EVENT_IO_HPP

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "sas/montecarlo.hpp"

namespace sas {

// Event-stream file formats. Both carry the records only; pulse count and
// repetition rate travel as run parameters, so readers report
// n_pulses = last pulse + 1 and rep_rate_hz = 0 for the caller to override.
//
// CSV: header `pulse_index,channel`, one record per row, channel written as
// S or aS (0/1 also accepted on input).
//
// Binary: 8-byte magic "SASEVT01", uint64 little-endian record count, then
// 9 bytes per record: uint64 little-endian pulse index, uint8 channel
// (0 = S, 1 = aS).

inline constexpr char kEventMagic[8] = {'S', 'A', 'S', 'E', 'V', 'T', '0', '1'};

void write_events_csv(const EventStream& stream, std::ostream& out);
EventStream read_events_csv(std::istream& in, const std::string& source_name);

void write_events_binary(const EventStream& stream, std::ostream& out);
EventStream read_events_binary(std::istream& in, const std::string& source_name);

// Path conveniences; read_events sniffs the magic to pick the format.
void write_events_file(const EventStream& stream, const std::filesystem::path& path,
                       bool binary);
EventStream read_events_file(const std::filesystem::path& path);

}  // namespace sas

#endif
