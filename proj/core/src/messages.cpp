#include "vanetmon/messages.hpp"

namespace vanetmon {

namespace {

// Caps a single length field; wire values beyond this are treated as a
// corrupt length rather than an allocation request.
constexpr std::uint32_t kMaxFieldLen = 1u << 24;

constexpr std::uint8_t kTagData = 0x01;
constexpr std::uint8_t kTagEncrypted = 0x02;
constexpr std::uint8_t kTagAggregate = 0x03;
constexpr std::uint8_t kTagChallenge = 0x04;
constexpr std::uint8_t kTagSearch = 0x05;
constexpr std::uint8_t kTagCryptoChallenge = 0x06;
constexpr std::uint8_t kTagCryptoResponse = 0x07;

class Writer {
 public:
  Bytes take() { return std::move(out_); }

  void u8(std::uint8_t v) { out_.push_back(v); }

  void u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
      out_.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
  }

  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }

  void i64(std::int64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
      out_.push_back(static_cast<std::uint8_t>((static_cast<std::uint64_t>(v) >> shift) & 0xff));
  }

  void bytes(const Bytes& b) {
    u32(static_cast<std::uint32_t>(b.size()));
    out_.insert(out_.end(), b.begin(), b.end());
  }

  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }

  void nat(const Nat& n) { bytes(nat_to_bytes(n)); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(const Bytes& b) : data_(b) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }

  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }

  std::int64_t i64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
    return static_cast<std::int64_t>(v);
  }

  Bytes bytes() {
    const std::uint32_t len = length();
    need(len);
    Bytes out(data_.begin() + pos_, data_.begin() + pos_ + len);
    pos_ += len;
    return out;
  }

  std::string str() {
    const std::uint32_t len = length();
    need(len);
    std::string out(data_.begin() + pos_, data_.begin() + pos_ + len);
    pos_ += len;
    return out;
  }

  Nat nat() {
    Bytes b = bytes();
    if (!b.empty() && b.front() == 0)
      throw DecodeError(DecodeError::Kind::BadValue,
                        "non-canonical natural (leading zero)");
    return nat_from_bytes(b);
  }

  void finish() const {
    if (pos_ != data_.size())
      throw DecodeError(DecodeError::Kind::BadValue, "trailing bytes after message");
  }

 private:
  std::uint32_t length() {
    const std::uint32_t len = u32();
    if (len > kMaxFieldLen)
      throw DecodeError(DecodeError::Kind::LengthOverflow, "length field too large");
    return len;
  }

  void need(std::size_t count) const {
    if (data_.size() - pos_ < count)
      throw DecodeError(DecodeError::Kind::Truncated, "buffer truncated");
  }

  const Bytes& data_;
  std::size_t pos_ = 0;
};

void expect_tag(Reader& r, std::uint8_t tag) {
  if (r.u8() != tag)
    throw DecodeError(DecodeError::Kind::BadValue, "unexpected message tag");
}

Event read_event(Reader& r) {
  const std::uint8_t v = r.u8();
  if (v > 1) throw DecodeError(DecodeError::Kind::BadValue, "bad event code");
  return static_cast<Event>(v);
}

SearchResponse read_response(Reader& r) {
  const std::uint8_t v = r.u8();
  if (v > 1) throw DecodeError(DecodeError::Kind::BadValue, "bad response code");
  return static_cast<SearchResponse>(v);
}

void write_data_packet_body(Writer& w, const DataPacket& m) {
  w.str(m.v_id);
  w.bytes(m.ds);
  w.u8(static_cast<std::uint8_t>(m.event));
  w.i32(m.vel_mph100);
  w.i64(m.gps_mm);
  w.u32(static_cast<std::uint32_t>(m.enc_ids.size()));
  for (const Nat& n : m.enc_ids) w.nat(n);
  w.u32(static_cast<std::uint32_t>(m.trajectory.size()));
  for (const std::string& rsu : m.trajectory) w.str(rsu);
}

DataPacket read_data_packet_body(Reader& r) {
  DataPacket m;
  m.v_id = r.str();
  m.ds = r.bytes();
  m.event = read_event(r);
  m.vel_mph100 = r.i32();
  if (m.vel_mph100 < 0)
    throw DecodeError(DecodeError::Kind::Invariant, "negative velocity");
  m.gps_mm = r.i64();
  const std::uint32_t n_ids = r.u32();
  if (n_ids > kMaxFieldLen)
    throw DecodeError(DecodeError::Kind::LengthOverflow, "enc_ids count too large");
  m.enc_ids.reserve(n_ids);
  for (std::uint32_t i = 0; i < n_ids; ++i) m.enc_ids.push_back(r.nat());
  const std::uint32_t n_traj = r.u32();
  if (n_traj > kMaxFieldLen)
    throw DecodeError(DecodeError::Kind::LengthOverflow, "trajectory count too large");
  if (n_traj == 0)
    throw DecodeError(DecodeError::Kind::Invariant, "empty trajectory");
  m.trajectory.reserve(n_traj);
  for (std::uint32_t i = 0; i < n_traj; ++i) m.trajectory.push_back(r.str());
  return m;
}

void write_encrypted_body(Writer& w, const EncryptedDataPacket& m) {
  w.nat(m.tau);
  w.bytes(m.body);
}

EncryptedDataPacket read_encrypted_body(Reader& r) {
  EncryptedDataPacket m;
  m.tau = r.nat();
  m.body = r.bytes();
  return m;
}

}  // namespace

Event opposite(Event e) {
  return e == Event::Congested ? Event::NonCongested : Event::Congested;
}

const char* to_string(Event e) {
  return e == Event::Congested ? "congested" : "non_congested";
}

Bytes serialize_data_packet(const DataPacket& m) {
  Writer w;
  w.u8(kTagData);
  write_data_packet_body(w, m);
  return w.take();
}

DataPacket deserialize_data_packet(const Bytes& b) {
  Reader r(b);
  expect_tag(r, kTagData);
  DataPacket m = read_data_packet_body(r);
  r.finish();
  return m;
}

Bytes serialize_encrypted_data_packet(const EncryptedDataPacket& m) {
  Writer w;
  w.u8(kTagEncrypted);
  write_encrypted_body(w, m);
  return w.take();
}

EncryptedDataPacket deserialize_encrypted_data_packet(const Bytes& b) {
  Reader r(b);
  expect_tag(r, kTagEncrypted);
  EncryptedDataPacket m = read_encrypted_body(r);
  r.finish();
  return m;
}

Bytes serialize_aggregate_packet(const AggregatePacket& m) {
  Writer w;
  w.u8(kTagAggregate);
  w.str(m.rsu_id);
  w.i64(m.location_mm);
  w.u32(static_cast<std::uint32_t>(m.packets.size()));
  for (const auto& p : m.packets) write_encrypted_body(w, p);
  return w.take();
}

AggregatePacket deserialize_aggregate_packet(const Bytes& b) {
  Reader r(b);
  expect_tag(r, kTagAggregate);
  AggregatePacket m;
  m.rsu_id = r.str();
  m.location_mm = r.i64();
  const std::uint32_t count = r.u32();
  if (count == 0)
    throw DecodeError(DecodeError::Kind::Invariant, "aggregate without packets");
  if (count > kMaxFieldLen)
    throw DecodeError(DecodeError::Kind::LengthOverflow, "aggregate count too large");
  m.packets.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) m.packets.push_back(read_encrypted_body(r));
  r.finish();
  return m;
}

Bytes serialize_challenge_packet(const ChallengePacket& m) {
  Writer w;
  w.u8(kTagChallenge);
  for (const ChallengeEntry& e : m.entries) {
    w.str(e.cv);
    w.u32(static_cast<std::uint32_t>(e.expected_rsus.size()));
    for (const std::string& rsu : e.expected_rsus) w.str(rsu);
    w.i32(e.time_s);
  }
  return w.take();
}

ChallengePacket deserialize_challenge_packet(const Bytes& b) {
  Reader r(b);
  expect_tag(r, kTagChallenge);
  ChallengePacket m;
  for (ChallengeEntry& e : m.entries) {
    e.cv = r.str();
    const std::uint32_t count = r.u32();
    if (count == 0)
      throw DecodeError(DecodeError::Kind::Invariant, "challenge entry without rsus");
    if (count > kMaxFieldLen)
      throw DecodeError(DecodeError::Kind::LengthOverflow, "rsu count too large");
    e.expected_rsus.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) e.expected_rsus.push_back(r.str());
    e.time_s = r.i32();
    if (e.time_s < 0)
      throw DecodeError(DecodeError::Kind::Invariant, "negative challenge time");
  }
  if (m.entries[0].cv == m.entries[1].cv)
    throw DecodeError(DecodeError::Kind::Invariant, "challenge entries share a cv");
  r.finish();
  return m;
}

Bytes serialize_vehicle_search(const VehicleSearch& m) {
  Writer w;
  w.u8(kTagSearch);
  w.str(m.rsu_id);
  w.str(m.cv);
  w.u8(static_cast<std::uint8_t>(m.response));
  return w.take();
}

VehicleSearch deserialize_vehicle_search(const Bytes& b) {
  Reader r(b);
  expect_tag(r, kTagSearch);
  VehicleSearch m;
  m.rsu_id = r.str();
  m.cv = r.str();
  m.response = read_response(r);
  r.finish();
  return m;
}

Bytes serialize_crypto_challenge(const CryptoChallengeFrame& m) {
  Writer w;
  w.u8(kTagCryptoChallenge);
  w.str(m.rsu_id);
  w.bytes(m.challenge);
  return w.take();
}

CryptoChallengeFrame deserialize_crypto_challenge(const Bytes& b) {
  Reader r(b);
  expect_tag(r, kTagCryptoChallenge);
  CryptoChallengeFrame m;
  m.rsu_id = r.str();
  m.challenge = r.bytes();
  r.finish();
  return m;
}

Bytes serialize_crypto_response(const CryptoResponseFrame& m) {
  Writer w;
  w.u8(kTagCryptoResponse);
  w.bytes(m.response);
  return w.take();
}

CryptoResponseFrame deserialize_crypto_response(const Bytes& b) {
  Reader r(b);
  expect_tag(r, kTagCryptoResponse);
  CryptoResponseFrame m;
  m.response = r.bytes();
  r.finish();
  return m;
}

}  // namespace vanetmon
