"""
Base DTO class for all data transfer objects
"""

from pydantic import BaseModel, ConfigDict


class BaseDTO(BaseModel):
    """Base class for all DTOs"""

    model_config = ConfigDict(
        populate_by_name=True,
        # Convert Enum to values during JSON serialization
        use_enum_values=True,
        # DTO 는 생성 후 불변 (공유 읽기 전용)
        frozen=True,
    )

    def to_json(self, indent: int = 2) -> str:
        """정렬된 키로 JSON 직렬화 (동일 입력 -> 동일 바이트)"""
        import json

        return json.dumps(self.model_dump(mode="json"), indent=indent, sort_keys=True)
