#pragma once

#include "privup/bits.hpp"
#include "privup/bounds.hpp"
#include "privup/bytes.hpp"
#include "privup/client.hpp"
#include "privup/codes.hpp"
#include "privup/digest.hpp"
#include "privup/files.hpp"
#include "privup/net.hpp"
#include "privup/pir.hpp"
#include "privup/protocol.hpp"
#include "privup/server.hpp"
#include "privup/syndrome.hpp"
#include "privup/transport.hpp"
#include "privup/wire.hpp"
