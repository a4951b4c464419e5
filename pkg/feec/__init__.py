import urllib.parse

__version__ = "0.1.0"


def space_for_url(url):
    """
    SpaceId from a URL like ``pminus+ring://?r=2&k=1&n=2``.

    Schemes: p, pminus, p+ring, pminus+ring (``-`` is accepted for ``+``).
    """
    from .spaces import SpaceId

    addr = urllib.parse.urlsplit(url)
    scheme = addr.scheme
    if scheme == "p":
        family, ring = "P", False
    elif scheme == "pminus":
        family, ring = "Pminus", False
    elif scheme in {"p+ring", "p-ring"}:
        family, ring = "P", True
    elif scheme in {"pminus+ring", "pminus-ring"}:
        family, ring = "Pminus", True
    else:
        raise ValueError("unsupported space scheme {!r} for {}".format(scheme, url))
    options = {}
    for option, values in urllib.parse.parse_qs(addr.query, True).items():
        if option not in {"r", "k", "n"}:
            raise ValueError("unknown option: {!r}".format(option))
        try:
            options[option] = int(values[0])
        except ValueError:
            raise ValueError(
                "option {} must be an integer, got {!r}".format(option, values[0])
            )
    missing = {"r", "k", "n"} - set(options)
    if missing:
        raise ValueError("missing options {} in {}".format(sorted(missing), url))
    return SpaceId(family, options["r"], options["k"], options["n"], ring=ring)
