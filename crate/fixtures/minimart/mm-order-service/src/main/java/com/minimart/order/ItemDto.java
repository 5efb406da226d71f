package com.minimart.order;

import lombok.Data;

@Data
public class ItemDto {

    private String id;

    private String name;
}
