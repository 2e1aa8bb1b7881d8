#pragma once

#include "chronoagg/bch_error.hpp"
#include "chronoagg/compressor.hpp"
#include "chronoagg/diffusion.hpp"
#include "chronoagg/error.hpp"
#include "chronoagg/ingest.hpp"
#include "chronoagg/report.hpp"
#include "chronoagg/snapshot.hpp"
#include "chronoagg/validation.hpp"
