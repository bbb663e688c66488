#include "beaconsim/core_model.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <stdexcept>
#include <system_error>

#include "beaconsim/mobility.hpp"

namespace beaconsim {

double clamp_power(double dbm) { return std::clamp(dbm, kRegMinDbm, kRegMaxDbm); }

Beacon make_beacon(VehicleState& v, SimTime now) {
  Beacon b;
  b.seq = ++v.last_seq;
  b.interval_ms = kBeaconIntervalMs;
  b.timestamp = now;
  b.sender_id = v.id;
  b.position = v.position;
  b.speed_kmh = v.speed_kmh;
  b.direction = v.direction;
  b.pop_best_dbm = v.pso.pbest_dbm;
  b.pow_u_dbm = v.tx_power_dbm;
  return b;
}

void record_beacon(VehicleState& v, const Beacon& b, SimTime rx_time) {
  if (b.sender_id == v.id) {
    throw std::invalid_argument("vehicle cannot record its own beacon");
  }
  auto [it, inserted] = v.neighbors.try_emplace(b.sender_id);
  NeighborState& n = it->second;
  if (inserted) n.id = b.sender_id;

  auto& sl = n.sequence_list;
  auto pos = std::lower_bound(sl.begin(), sl.end(), b.seq);
  if ((pos == sl.end() || *pos != b.seq) && sl.size() < static_cast<std::size_t>(kBeaconsPerSecond)) {
    sl.insert(pos, b.seq);
  }
  n.last_position = b.position;
  n.last_speed_kmh = b.speed_kmh;
  n.last_direction = b.direction;
  n.last_pop_best_dbm = b.pop_best_dbm;
  n.last_pow_u_dbm = b.pow_u_dbm;
  n.last_rx_time = std::max(n.last_rx_time, rx_time);
}

void reset_window(VehicleState& v, SimTime now, SimTime stale_timeout) {
  std::erase_if(v.neighbors, [&](const auto& kv) { return now - kv.second.last_rx_time > stale_timeout; });
  for (auto& [id, n] : v.neighbors) n.sequence_list.clear();
}

std::vector<const NeighborState*> neighbors_by_distance(const VehicleState& v,
                                                        const RoadGeometry& road) {
  std::vector<std::pair<double, const NeighborState*>> keyed;
  keyed.reserve(v.neighbors.size());
  for (const auto& [id, n] : v.neighbors) {
    keyed.emplace_back(distance(v.position, n.last_position, road), &n);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second->id < b.second->id;
  });
  std::vector<const NeighborState*> out;
  out.reserve(keyed.size());
  for (const auto& [d, n] : keyed) out.push_back(n);
  return out;
}

namespace {

class FrameWriter {
 public:
  explicit FrameWriter(BeaconFrame& frame) : frame_(frame) {}

  template <typename T>
  void put(T value) {
    auto bits = std::bit_cast<std::array<std::byte, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
    std::copy(bits.begin(), bits.end(), frame_.begin() + offset_);
    offset_ += sizeof(T);
  }

 private:
  BeaconFrame& frame_;
  std::size_t offset_ = 0;
};

class FrameReader {
 public:
  explicit FrameReader(std::span<const std::byte> frame) : frame_(frame) {}

  template <typename T>
  T get() {
    std::array<std::byte, sizeof(T)> bits;
    std::copy_n(frame_.begin() + offset_, sizeof(T), bits.begin());
    if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
    offset_ += sizeof(T);
    return std::bit_cast<T>(bits);
  }

 private:
  std::span<const std::byte> frame_;
  std::size_t offset_ = 0;
};

}  // namespace

BeaconFrame encode_beacon(const Beacon& b) {
  BeaconFrame frame{};
  FrameWriter w(frame);
  w.put<std::uint64_t>(b.seq);
  w.put<std::uint32_t>(b.interval_ms);
  w.put<std::int64_t>(b.timestamp.count());
  w.put<std::uint32_t>(b.sender_id);
  w.put<double>(b.position.x_m);
  w.put<std::int32_t>(b.position.lane);
  w.put<double>(b.speed_kmh);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(b.direction));
  w.put<double>(b.pop_best_dbm);
  w.put<double>(b.pow_u_dbm);
  return frame;
}

Beacon decode_beacon(std::span<const std::byte> frame) {
  if (frame.size() != kBeaconWireBytes) {
    throw std::invalid_argument("beacon frame must be exactly 512 bytes");
  }
  FrameReader r(frame);
  Beacon b;
  b.seq = r.get<std::uint64_t>();
  b.interval_ms = r.get<std::uint32_t>();
  b.timestamp = SimTime{r.get<std::int64_t>()};
  b.sender_id = r.get<std::uint32_t>();
  b.position.x_m = r.get<double>();
  b.position.lane = r.get<std::int32_t>();
  b.speed_kmh = r.get<double>();
  auto dir = r.get<std::uint8_t>();
  if (dir > 1) throw std::invalid_argument("invalid direction byte in beacon frame");
  b.direction = static_cast<Direction>(dir);
  b.pop_best_dbm = r.get<double>();
  b.pow_u_dbm = r.get<double>();
  return b;
}

TraceRecord make_trace_record(SimTime rx_time, VehicleId receiver, const Beacon& b) {
  return TraceRecord{rx_time,    receiver,    b.sender_id,     b.seq,
                     b.position, b.speed_kmh, b.pop_best_dbm, b.pow_u_dbm};
}

namespace {

template <typename T>
void append_number(std::string& out, T value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, end);
}

template <typename T>
T parse_field(std::string_view field) {
  T value{};
  auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || end != field.data() + field.size()) {
    throw std::invalid_argument("malformed trace field: " + std::string(field));
  }
  return value;
}

}  // namespace

std::string format_trace_line(const TraceRecord& r) {
  std::string out;
  out.reserve(96);
  append_number(out, r.rx_time.count());
  out += ',';
  append_number(out, r.receiver_id);
  out += ',';
  append_number(out, r.sender_id);
  out += ',';
  append_number(out, r.seq);
  out += ',';
  append_number(out, r.position.x_m);
  out += ',';
  append_number(out, r.position.lane);
  out += ',';
  append_number(out, r.speed_kmh);
  out += ',';
  append_number(out, r.pop_best_dbm);
  out += ',';
  append_number(out, r.pow_u_dbm);
  return out;
}

TraceRecord parse_trace_line(std::string_view line) {
  std::array<std::string_view, 9> fields;
  std::size_t n = 0;
  while (true) {
    auto comma = line.find(',');
    if (n == fields.size()) throw std::invalid_argument("too many trace fields");
    fields[n++] = line.substr(0, comma);
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  if (n != fields.size()) throw std::invalid_argument("trace line needs 9 fields");

  TraceRecord r;
  r.rx_time = SimTime{parse_field<std::int64_t>(fields[0])};
  r.receiver_id = parse_field<VehicleId>(fields[1]);
  r.sender_id = parse_field<VehicleId>(fields[2]);
  r.seq = parse_field<SeqNo>(fields[3]);
  r.position.x_m = parse_field<double>(fields[4]);
  r.position.lane = parse_field<int>(fields[5]);
  r.speed_kmh = parse_field<double>(fields[6]);
  r.pop_best_dbm = parse_field<double>(fields[7]);
  r.pow_u_dbm = parse_field<double>(fields[8]);
  return r;
}

}  // namespace beaconsim
