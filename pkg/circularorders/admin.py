from django.contrib import admin

from .models import KnownNegative, VerdictRecord


@admin.register(KnownNegative)
class KnownNegativeAdmin(admin.ModelAdmin):
    list_display = ["name", "identification"]
    search_fields = ["name", "identification"]


@admin.register(VerdictRecord)
class VerdictRecordAdmin(admin.ModelAdmin):
    list_display = ["subcommand", "verdict", "created"]
    list_filter = ["subcommand", "verdict"]
    readonly_fields = ["query", "result", "created"]
