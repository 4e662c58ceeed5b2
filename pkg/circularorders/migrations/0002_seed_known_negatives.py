from django.db import migrations

KNOWN_NEGATIVES = [
    {
        "name": "Weeks manifold",
        "identification": "Σ₃(5₂) = Σ₂(9₄₉)",
        "aliases": ["weeks", "W", "Σ₃(5₂)", "Σ₂(9₄₉)", "m003(-3,1)"],
        "citation": (
            "the Weeks manifold is not circularly orderable (Calegari-Dunfield); "
            "it is homeomorphic to the 3-fold branched cover of 5_2 "
            "and the 2-fold branched cover of 9_49 (Mednykh-Vesnin)"
        ),
    },
]


def seed(apps, schema_editor):
    KnownNegative = apps.get_model("circularorders", "KnownNegative")
    for entry in KNOWN_NEGATIVES:
        KnownNegative.objects.update_or_create(name=entry["name"], defaults=entry)


def unseed(apps, schema_editor):
    KnownNegative = apps.get_model("circularorders", "KnownNegative")
    KnownNegative.objects.filter(name__in=[e["name"] for e in KNOWN_NEGATIVES]).delete()


class Migration(migrations.Migration):

    dependencies = [
        ("circularorders", "0001_initial"),
    ]

    operations = [
        migrations.RunPython(seed, unseed),
    ]
