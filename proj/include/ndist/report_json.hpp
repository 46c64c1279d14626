#pragma once

#include <json.hpp>

#include "ndist/entropy.hpp"
#include "ndist/equicont.hpp"
#include "ndist/ndiameter.hpp"
#include "ndist/proximal.hpp"
#include "ndist/structure.hpp"

namespace ndist {

using Json = nlohmann::ordered_json;

// Non-finite reals become null.
Json real(double v);

Json to_json(const PointCloud& c);
Json to_json(const ProximalCellEstimate& c);
// cells larger than one point are listed in full; singletons only counted
Json to_json(const ProximalReport& r);
Json to_json(const CellGrowth& g);
Json to_json(const QuotientResult& q);
Json to_json(const NDiameter& d);
Json to_json(const RSetEstimate& r);
Json to_json(const EquicontinuityVerdict& v);
Json to_json(const ReturnProfile& p);
Json to_json(const std::vector<PeriodicPoint>& p);
Json to_json(const std::vector<MinimalSetEstimate>& m);
Json to_json(const ExpansivityVerdict& v);
Json to_json(const AuditRecord& a);
Json to_json(const EntropyEstimate& e);
Json to_json(const GeometricPartition& g);
Json to_json(const KsAudit& a);

}  // namespace ndist
