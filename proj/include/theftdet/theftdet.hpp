#pragma once

#include "theftdet/catalog.hpp"
#include "theftdet/codebook_io.hpp"
#include "theftdet/corpus.hpp"
#include "theftdet/csv.hpp"
#include "theftdet/detect.hpp"
#include "theftdet/error.hpp"
#include "theftdet/kmeans.hpp"
#include "theftdet/pipeline.hpp"
#include "theftdet/reconstruct.hpp"
#include "theftdet/report.hpp"
#include "theftdet/synth.hpp"
#include "theftdet/trip.hpp"
#include "theftdet/window.hpp"
