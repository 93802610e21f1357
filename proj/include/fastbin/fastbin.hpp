#pragma once

// Everything except the command-line harness.

#include "fastbin/bitcode.hpp"
#include "fastbin/core/fft.hpp"
#include "fastbin/core/transforms.hpp"
#include "fastbin/core/types.hpp"
#include "fastbin/embedding.hpp"
#include "fastbin/jl.hpp"
#include "fastbin/metrics.hpp"
#include "fastbin/params.hpp"
#include "fastbin/random.hpp"
#include "fastbin/stats.hpp"
